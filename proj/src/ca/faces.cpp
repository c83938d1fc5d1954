#include "persona/ca/faces.hpp"

#include <cstdlib>

#include <opencv2/core.hpp>
#include <opencv2/objdetect.hpp>

#ifndef PERSONA_DATA_DIR
#define PERSONA_DATA_DIR "data"
#endif

namespace persona::ca {

struct FaceDetector::Impl {
    cv::CascadeClassifier cascade;
};

FaceDetector::FaceDetector(const std::filesystem::path& cascade_path)
    : impl_(std::make_unique<Impl>()), path_(cascade_path) {
    if (!std::filesystem::is_regular_file(cascade_path))
        throw DataError("face cascade model not found: " + cascade_path.string());
    bool loaded = false;
    try {
        loaded = impl_->cascade.load(cascade_path.string());
    } catch (const cv::Exception&) {
        loaded = false;
    }
    if (!loaded || impl_->cascade.empty())
        throw DataError("face cascade model is corrupt or unreadable: " + cascade_path.string());
}

FaceDetector::~FaceDetector() = default;
FaceDetector::FaceDetector(FaceDetector&&) noexcept = default;
FaceDetector& FaceDetector::operator=(FaceDetector&&) noexcept = default;

std::size_t FaceDetector::count_faces(const image::GrayImage& gray) {
    if (gray.width() < 24 || gray.height() < 24) return 0;
    const cv::Mat view(gray.height(), gray.width(), CV_8UC1, const_cast<std::uint8_t*>(gray.pixels().data()));
    std::vector<cv::Rect> faces;
    impl_->cascade.detectMultiScale(view, faces, 1.1, 3, 0, cv::Size(24, 24));
    return faces.size();
}

std::filesystem::path default_cascade_path() {
    if (const char* env = std::getenv("PERSONA_CASCADE"); env && *env) return env;
    return std::filesystem::path(PERSONA_DATA_DIR) / "haarcascade_frontalface_default.xml";
}

}  // namespace persona::ca
