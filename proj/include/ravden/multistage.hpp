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

#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ravden/fusion.hpp"

namespace ravden::multistage {

/// Shared configuration for every stage; per-stage overrides are
/// intentionally not exposed.
struct DenoiseConfig {
    int stages = 2;
    flow::FlowConfig flow;
    fusion::FusionConfig fusion;
    /// Stages past the first reuse the stage-1 flows between the same frame
    /// indices instead of re-estimating; a speed-for-quality approximation.
    bool reuse_flows = false;
};

struct RunStats {
    std::size_t flow_estimates = 0;
    std::size_t blocks = 0;
};

/// Index bookkeeping of the N-stage recursion. Window frames are numbered
/// 0..2N relative to the window start; stage i in 1..N consumes relative
/// indices [i-1, 2N-i+1] and emits centers [i, 2N-i].
struct StageSchedule {
    int stages = 1;

    static StageSchedule for_stages(int n);

    int window_size() const { return 2 * stages + 1; }
    int outputs_at_stage(int stage) const { return 2 * (stages - stage) + 1; }
    std::pair<int, int> stage_input_range(int stage) const {
        return {stage - 1, 2 * stages - stage + 1};
    }
    std::pair<int, int> stage_output_range(int stage) const {
        return {stage, 2 * stages - stage};
    }
    int total_blocks() const { return stages * stages; }

    /// Stage blocks run by a streaming pass over a length-L sequence:
    /// N (L - N - 1), linear in L.
    static std::size_t stream_total_blocks(int stages, std::size_t length);
};

/// Collapses one (2N+1)-frame window to the single denoised center frame.
/// Honors cfg.reuse_flows.
PackedRawFrame denoise_window(std::span<const PackedRawFrame> frames,
                              const DenoiseConfig& cfg, RunStats* stats = nullptr);

/// Incremental sliding-window denoiser. In steady state each pushed frame
/// triggers exactly one block per stage and yields one output; results are
/// bit-identical to per-window denoise_window calls. Single-owner mutable
/// state: one consumer per stream.
class DenoiseStream {
 public:
    explicit DenoiseStream(DenoiseConfig cfg);

    /// Consumes one frame; returns the denoised frame for index
    /// (frames_consumed - 1 - N) once the pipeline has filled.
    std::optional<PackedRawFrame> push(const PackedRawFrame& frame);

    std::size_t frames_consumed() const { return static_cast<std::size_t>(consumed_); }
    const RunStats& stats() const { return stats_; }

 private:
    struct Entry {
        long index;
        PackedRawFrame frame;
    };

    DenoiseConfig cfg_;
    std::vector<std::deque<Entry>> levels_;
    std::map<long, fusion::BlockFlows> stage1_flows_;
    long consumed_ = 0;
    RunStats stats_;
};

/// Batch driver over a whole sequence; emits outputs for t in [N, len-1-N].
Sequence<PackedRawFrame> denoise_stream(const Sequence<PackedRawFrame>& input,
                                        const DenoiseConfig& cfg,
                                        RunStats* stats = nullptr);

}  // namespace ravden::multistage
