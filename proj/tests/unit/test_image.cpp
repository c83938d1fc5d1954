#include <gtest/gtest.h>

#include "persona/image/image.hpp"
#include "support.hpp"

using namespace persona;
using namespace persona::image;

TEST(Image, GrayIsRoundedBt601) {
    RgbImage img(2, 1);
    img(0, 0) = {255, 0, 0};
    img(1, 0) = {10, 200, 30};
    const auto g = to_gray(img);
    EXPECT_EQ(g(0, 0), 76);   // 76.245
    EXPECT_EQ(g(1, 0), 124);  // 2.99 + 117.4 + 3.42 = 123.81
}

TEST(Image, JpegRoundTripKeepsGeometry) {
    const auto img = testkit::blob_rgb(33, 17, 1);
    const auto bytes = encode_jpeg(img, {95, false});
    ASSERT_GE(bytes.size(), 4u);
    EXPECT_EQ(bytes[0], 0xFF);
    EXPECT_EQ(bytes[1], 0xD8);
    const auto back = decode_image(bytes);
    EXPECT_EQ(back.width(), 33);
    EXPECT_EQ(back.height(), 17);
}

TEST(Image, UndecodableBytesAreADataError) {
    const std::vector<std::uint8_t> junk{0xFF, 0xD8, 0x00, 0x01, 0x02};
    EXPECT_THROW(decode_image(junk), DataError);
}

TEST(Image, Reflect101) {
    EXPECT_EQ(reflect101(-1, 5), 1);
    EXPECT_EQ(reflect101(-2, 5), 2);
    EXPECT_EQ(reflect101(5, 5), 3);
    EXPECT_EQ(reflect101(6, 5), 2);
    EXPECT_EQ(reflect101(0, 1), 0);
}

TEST(Image, MirrorAndRotateAreInvolutions) {
    const auto img = testkit::random_rgb(7, 5, 2);
    EXPECT_EQ(mirror_horizontal(mirror_horizontal(img)), img);
    EXPECT_EQ(rotate_180(rotate_180(img)), img);
    EXPECT_EQ(mirror_horizontal(img)(0, 0), img(6, 0));
    EXPECT_EQ(rotate_180(img)(0, 0), img(6, 4));
}

TEST(Image, BlurCommutesExactlyWithMirrorAndRotation) {
    const auto rgb = testkit::random_rgb(23, 19, 3);
    const auto plane = to_real(to_gray(rgb));
    const auto mirrored = to_real(to_gray(mirror_horizontal(rgb)));
    const auto a = gaussian_blur(plane, 1.4), b = gaussian_blur(mirrored, 1.4);
    for (int y = 0; y < 19; ++y)
        for (int x = 0; x < 23; ++x) ASSERT_EQ(a(x, y), b(22 - x, y));
    const auto c = gaussian_blur(to_real(to_gray(rotate_180(rgb))), 1.4);
    for (int y = 0; y < 19; ++y)
        for (int x = 0; x < 23; ++x) ASSERT_EQ(a(x, y), c(22 - x, 18 - y));
}

TEST(Image, BlurPreservesConstants) {
    RealPlane p(9, 9, 3.25);
    const auto b = gaussian_blur(p, 2.0);
    for (double v : b.pixels()) EXPECT_NEAR(v, 3.25, 1e-12);
}
