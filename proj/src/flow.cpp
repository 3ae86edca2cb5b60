// Copyright (c) 2026 The ravden authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ravden/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "image_ops.hpp"

namespace ravden::flow {

namespace {

using detail::coverage;
using detail::downsample_half;
using detail::sample_bilinear;

constexpr double kDamping = 1e-4;     // Tikhonov term in the normal equations
constexpr float kFlatRange = 1e-12f;  // all-constant input detection
constexpr int kAutoMinDim = 16;
constexpr int kAutoMaxLevels = 5;

// Bilinear resize of both flow components with a displacement scale factor.
FlowField resize_flow(const FlowField& flow, int nh, int nw, float scale) {
    FlowField out(nh, nw);
    const float rx = static_cast<float>(flow.width()) / static_cast<float>(nw);
    const float ry = static_cast<float>(flow.height()) / static_cast<float>(nh);
    for (int y = 0; y < nh; ++y) {
        const float sy = (static_cast<float>(y) + 0.5f) * ry - 0.5f;
        for (int x = 0; x < nw; ++x) {
            const float sx = (static_cast<float>(x) + 0.5f) * rx - 0.5f;
            out.u(y, x) = scale * sample_bilinear(flow.u_plane(), flow.height(),
                                                  flow.width(), sx, sy);
            out.v(y, x) = scale * sample_bilinear(flow.v_plane(), flow.height(),
                                                  flow.width(), sx, sy);
        }
    }
    return out;
}

// Window sums over window ∩ image, no normalization.
void box_sum(const std::vector<float>& src, int h, int w, int radius,
             std::vector<float>& tmp, std::vector<float>& dst) {
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(w - 1, x + radius);
            for (int xx = x0; xx <= x1; ++xx) acc += src[std::size_t(y) * w + xx];
            tmp[std::size_t(y) * w + x] = static_cast<float>(acc);
        }
    }
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(h - 1, y + radius);
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int yy = y0; yy <= y1; ++yy) acc += tmp[std::size_t(yy) * w + x];
            dst[std::size_t(y) * w + x] = static_cast<float>(acc);
        }
    }
}

void median_filter_3x3(std::vector<float>& plane, int h, int w,
                       std::vector<float>& scratch) {
    scratch.resize(plane.size());
    std::array<float, 9> window;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int n = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= h) continue;
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= w) continue;
                    window[n++] = plane[std::size_t(yy) * w + xx];
                }
            }
            std::nth_element(window.begin(), window.begin() + n / 2, window.begin() + n);
            scratch[std::size_t(y) * w + x] = window[n / 2];
        }
    }
    plane.swap(scratch);
}

bool is_flat(const Frame& frame) {
    const auto [lo, hi] = std::minmax_element(frame.data().begin(), frame.data().end());
    return (*hi - *lo) <= kFlatRange;
}

int pyramid_level_count(const FlowConfig& cfg, int height, int width) {
    // Explicit counts are honored as long as the coarsest level keeps a
    // minimum dimension of 4.
    const int min_dim = cfg.pyramid_levels > 0 ? 4 : kAutoMinDim;
    const int cap = cfg.pyramid_levels > 0 ? cfg.pyramid_levels : kAutoMaxLevels;
    int levels = 1;
    int h = height, w = width;
    while (levels < cap) {
        const int nh = (h + 1) / 2;
        const int nw = (w + 1) / 2;
        if (std::min(nh, nw) < min_dim) break;
        h = nh;
        w = nw;
        ++levels;
    }
    return levels;
}

}  // namespace

FlowField::FlowField(int height, int width) : height_(height), width_(width) {
    if (height <= 0 || width <= 0) {
        throw std::invalid_argument("FlowField: dimensions must be positive");
    }
    u_.assign(pixel_count(), 0.0f);
    v_.assign(pixel_count(), 0.0f);
}

ValidityMask::ValidityMask(int height, int width, float fill)
    : height_(height), width_(width) {
    if (height <= 0 || width <= 0) {
        throw std::invalid_argument("ValidityMask: dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(height) * width, fill);
}

FlowResult estimate_flow(const Frame& reference, const Frame& target,
                         const FlowConfig& cfg) {
    if (reference.channels() != 1 || target.channels() != 1) {
        throw std::invalid_argument("estimate_flow: expected single-channel frames");
    }
    if (!reference.same_shape(target)) {
        throw std::invalid_argument("estimate_flow: frame dimensions differ");
    }
    if (cfg.window < 3 || cfg.window % 2 == 0) {
        throw std::invalid_argument("estimate_flow: window must be odd and >= 3");
    }
    if (cfg.iters_per_level < 1) {
        throw std::invalid_argument("estimate_flow: iters_per_level must be >= 1");
    }

    FlowResult result;
    if (is_flat(reference) || is_flat(target)) {
        result.final = FlowField(reference.height(), reference.width());
        result.iterations.push_back(result.final);
        result.degenerate_input = true;
        return result;
    }

    const int levels = pyramid_level_count(cfg, reference.height(), reference.width());
    std::vector<Frame> ref_pyr{reference};
    std::vector<Frame> tgt_pyr{target};
    for (int l = 1; l < levels; ++l) {
        ref_pyr.push_back(downsample_half(ref_pyr.back()));
        tgt_pyr.push_back(downsample_half(tgt_pyr.back()));
    }

    const int radius = cfg.window / 2;
    FlowField flow(ref_pyr.back().height(), ref_pyr.back().width());
    std::vector<float> ix, iy, it, xx, xy, yy, xt, yt, tmp, sxx, sxy, syy, sxt, syt,
        scratch;

    for (int level = levels - 1; level >= 0; --level) {
        const Frame& ref = ref_pyr[level];
        const Frame& tgt = tgt_pyr[level];
        const int h = ref.height();
        const int w = ref.width();
        const std::size_t n = static_cast<std::size_t>(h) * w;
        if (level != levels - 1) {
            flow = resize_flow(flow, h, w, 2.0f);
        }
        for (auto* buf : {&ix, &iy, &it, &xx, &xy, &yy, &xt, &yt, &tmp, &sxx, &sxy,
                          &syy, &sxt, &syt}) {
            buf->resize(n);
        }
        auto ref_plane = ref.plane(0);
        auto tgt_plane = tgt.plane(0);

        for (int pass = 0; pass < cfg.iters_per_level; ++pass) {
            // Warp the target by the current flow, then linearize around it.
            std::vector<float> warped(n);
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    warped[std::size_t(y) * w + x] =
                        sample_bilinear(tgt_plane, h, w,
                                        static_cast<float>(x) + flow.u(y, x),
                                        static_cast<float>(y) + flow.v(y, x));
                }
            }
            for (int y = 0; y < h; ++y) {
                const int ym = std::max(0, y - 1);
                const int yp = std::min(h - 1, y + 1);
                for (int x = 0; x < w; ++x) {
                    const int xm = std::max(0, x - 1);
                    const int xp = std::min(w - 1, x + 1);
                    const std::size_t i = std::size_t(y) * w + x;
                    ix[i] = 0.5f * (warped[std::size_t(y) * w + xp] -
                                    warped[std::size_t(y) * w + xm]);
                    iy[i] = 0.5f * (warped[std::size_t(yp) * w + x] -
                                    warped[std::size_t(ym) * w + x]);
                    it[i] = warped[i] - ref_plane[i];
                    xx[i] = ix[i] * ix[i];
                    xy[i] = ix[i] * iy[i];
                    yy[i] = iy[i] * iy[i];
                    xt[i] = ix[i] * it[i];
                    yt[i] = iy[i] * it[i];
                }
            }
            box_sum(xx, h, w, radius, tmp, sxx);
            box_sum(xy, h, w, radius, tmp, sxy);
            box_sum(yy, h, w, radius, tmp, syy);
            box_sum(xt, h, w, radius, tmp, sxt);
            box_sum(yt, h, w, radius, tmp, syt);
            for (std::size_t i = 0; i < n; ++i) {
                const double a11 = double(sxx[i]) + kDamping;
                const double a12 = sxy[i];
                const double a22 = double(syy[i]) + kDamping;
                const double b1 = -double(sxt[i]);
                const double b2 = -double(syt[i]);
                const double det = a11 * a22 - a12 * a12;  // >= kDamping^2
                const int y = static_cast<int>(i) / w;
                const int x = static_cast<int>(i) % w;
                flow.u(y, x) += static_cast<float>((a22 * b1 - a12 * b2) / det);
                flow.v(y, x) += static_cast<float>((a11 * b2 - a12 * b1) / det);
            }
            if (cfg.median_filter) {
                std::vector<float> u(flow.u_plane().begin(), flow.u_plane().end());
                std::vector<float> v(flow.v_plane().begin(), flow.v_plane().end());
                median_filter_3x3(u, h, w, scratch);
                median_filter_3x3(v, h, w, scratch);
                std::copy(u.begin(), u.end(), flow.u_plane().begin());
                std::copy(v.begin(), v.end(), flow.v_plane().begin());
            }
            if (level == 0) {
                result.iterations.push_back(flow);
            } else {
                result.iterations.push_back(resize_flow(flow, reference.height(),
                                                        reference.width(),
                                                        static_cast<float>(1 << level)));
            }
        }
    }
    result.final = result.iterations.back();
    return result;
}

namespace {

void warp_plane(std::span<const float> src, int h, int w, const FlowField& flow,
                std::span<float> dst) {
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            dst[std::size_t(y) * w + x] =
                sample_bilinear(src, h, w, static_cast<float>(x) + flow.u(y, x),
                                static_cast<float>(y) + flow.v(y, x));
        }
    }
}

ValidityMask warp_mask(int h, int w, const FlowField& flow) {
    ValidityMask mask(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float sx = static_cast<float>(x) + flow.u(y, x);
            const float sy = static_cast<float>(y) + flow.v(y, x);
            mask.at(y, x) = coverage(sx, w) * coverage(sy, h);
        }
    }
    return mask;
}

}  // namespace

std::pair<Frame, ValidityMask> warp(const Frame& source, const FlowField& flow) {
    if (source.height() != flow.height() || source.width() != flow.width()) {
        throw std::invalid_argument("warp: flow dimensions must match the source");
    }
    Frame out(source.height(), source.width(), source.channels(), source.colorspace());
    for (int c = 0; c < source.channels(); ++c) {
        warp_plane(source.plane(c), source.height(), source.width(), flow, out.plane(c));
    }
    return {std::move(out), warp_mask(source.height(), source.width(), flow)};
}

std::pair<PackedRawFrame, ValidityMask> warp(const PackedRawFrame& source,
                                             const FlowField& flow) {
    if (source.height() != flow.height() || source.width() != flow.width()) {
        throw std::invalid_argument("warp: flow dimensions must match the source");
    }
    PackedRawFrame out(source.height(), source.width());
    for (int p = 0; p < PackedRawFrame::kPlanes; ++p) {
        warp_plane(source.plane(p), source.height(), source.width(), flow, out.plane(p));
    }
    return {std::move(out), warp_mask(source.height(), source.width(), flow)};
}

ValidityMask fb_consistency(const FlowField& forward, const FlowField& backward) {
    if (!forward.same_shape(backward)) {
        throw std::invalid_argument("fb_consistency: flow dimensions differ");
    }
    const int h = forward.height();
    const int w = forward.width();
    ValidityMask mask(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float fu = forward.u(y, x);
            const float fv = forward.v(y, x);
            const float bx = static_cast<float>(x) + fu;
            const float by = static_cast<float>(y) + fv;
            const float bu = sample_bilinear(backward.u_plane(), h, w, bx, by);
            const float bv = sample_bilinear(backward.v_plane(), h, w, bx, by);
            const double round_trip = double(fu + bu) * (fu + bu) +
                                      double(fv + bv) * (fv + bv);
            const double magnitudes = double(fu) * fu + double(fv) * fv +
                                      double(bu) * bu + double(bv) * bv;
            mask.at(y, x) = round_trip < 0.01 * magnitudes + 0.5 ? 1.0f : 0.0f;
        }
    }
    return mask;
}

FlowObjectiveTerms flow_objective_terms(const FlowField& flow, const Frame& reference,
                                        const Frame& target) {
    if (!reference.same_shape(target)) {
        throw std::invalid_argument("flow_objective_terms: frame dimensions differ");
    }
    if (reference.height() != flow.height() || reference.width() != flow.width()) {
        throw std::invalid_argument("flow_objective_terms: flow dimensions differ");
    }
    FlowObjectiveTerms terms;
    const auto [warped, mask] = warp(target, flow);
    double acc = 0.0;
    for (int c = 0; c < reference.channels(); ++c) {
        auto wp = warped.plane(c);
        auto rp = reference.plane(c);
        for (std::size_t i = 0; i < wp.size(); ++i) {
            acc += std::abs(double(wp[i]) - double(rp[i]));
        }
    }
    terms.warp_l1 = acc / (reference.pixel_count() * reference.channels());

    double tv = 0.0;
    const int h = flow.height();
    const int w = flow.width();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (x + 1 < w) {
                tv += std::abs(double(flow.u(y, x + 1)) - flow.u(y, x));
                tv += std::abs(double(flow.v(y, x + 1)) - flow.v(y, x));
            }
            if (y + 1 < h) {
                tv += std::abs(double(flow.u(y + 1, x)) - flow.u(y, x));
                tv += std::abs(double(flow.v(y + 1, x)) - flow.v(y, x));
            }
        }
    }
    terms.tv = tv / flow.pixel_count();
    return terms;
}

double combine_flow_objective(std::span<const FlowObjectiveTerms> terms, double gamma,
                              double alpha) {
    if (terms.empty()) {
        throw std::invalid_argument("combine_flow_objective: no iteration terms");
    }
    const int n = static_cast<int>(terms.size());
    double total = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double weight = std::pow(gamma, n - i);
        total += weight * (alpha * terms[i - 1].warp_l1 + terms[i - 1].tv);
    }
    return total;
}

double flow_objective(const FlowResult& result, const Frame& reference_clean,
                      const Frame& target_clean, double gamma, double alpha) {
    if (result.iterations.empty()) {
        throw std::invalid_argument("flow_objective: empty iteration list");
    }
    std::vector<FlowObjectiveTerms> terms;
    terms.reserve(result.iterations.size());
    for (const auto& flow : result.iterations) {
        terms.push_back(flow_objective_terms(flow, reference_clean, target_clean));
    }
    return combine_flow_objective(terms, gamma, alpha);
}

}  // namespace ravden::flow
