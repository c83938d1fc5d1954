#pragma once

#include <filesystem>
#include <memory>

#include "persona/image/image.hpp"

namespace persona::ca {

/// Viola-Jones cascade detector. Holds a loaded model; not safe to share
/// across threads, so give each worker its own instance.
class FaceDetector {
public:
    explicit FaceDetector(const std::filesystem::path& cascade_path);
    ~FaceDetector();
    FaceDetector(FaceDetector&&) noexcept;
    FaceDetector& operator=(FaceDetector&&) noexcept;

    /// Detections after multi-scale evaluation and neighbour-based overlap
    /// merging (scale step 1.1, 3 neighbours, 24 px minimum window).
    std::size_t count_faces(const image::GrayImage& gray);

    const std::filesystem::path& model_path() const noexcept { return path_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::filesystem::path path_;
};

/// Cascade path from $PERSONA_CASCADE, else the bundled frontal-face model.
std::filesystem::path default_cascade_path();

}  // namespace persona::ca
