#pragma once

#include "ergokit/pose.hpp"
#include "ergokit/skeleton3d.hpp"

namespace ergokit {

// A viewpoint. Azimuth orbits about the vertical axis, elevation tips the
// view up or down; both in degrees. Orthographic projection scales with
// `ortho_scale` pixels per body-length unit when positive, otherwise the
// skeleton is auto-fitted to the image. Pinhole uses `distance` and
// `focal` and converges to the orthographic image with scale
// focal/distance as distance grows.
struct CameraSpec {
    enum class Mode { Orthographic, Pinhole };
    Mode mode = Mode::Orthographic;
    double azimuth = 0.0;
    double elevation = 0.0;
    double distance = 0.0;      // pinhole only, body-length units
    double focal = 0.0;         // pinhole only, pixels
    double ortho_scale = 0.0;   // orthographic only; <= 0 means auto-fit
    int image_width = 640;
    int image_height = 480;

    static CameraSpec frontal() { return {}; }
};

// Projects the skeleton to pixel keypoints, all confidences 1.0.
// Throws BehindCamera if a pinhole camera has a joint at or behind its
// image plane.
PoseFrame project(const Skeleton3D& skeleton, const CameraSpec& camera);

}  // namespace ergokit
