// Copyright 2026 The SBPlan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sbplan/checkpoint.h"

#include "binary_io.h"
#include "sbplan/error.h"

namespace sbplan {
namespace {

constexpr char kMagic[] = "SBCKPT01";
constexpr size_t kMagicLen = 8;

}  // namespace

const std::string& Checkpoint::Meta(const std::string& key) const {
  auto it = metadata.find(key);
  if (it == metadata.end()) {
    throw Error(ErrorCode::kCheckpointMismatch,
                "checkpoint lacks metadata key '" + key + "'");
  }
  return it->second;
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  internal::ByteWriter w;
  w.Raw(std::string_view(kMagic, kMagicLen));
  w.U64(ckpt.arch_hash);
  w.String(ckpt.kind);
  w.U32(static_cast<uint32_t>(ckpt.horizon));
  w.U32(static_cast<uint32_t>(ckpt.transition_dim));
  w.U32(static_cast<uint32_t>(ckpt.arch.size()));
  for (int a : ckpt.arch) w.U32(static_cast<uint32_t>(a));
  w.U32(static_cast<uint32_t>(ckpt.metadata.size()));
  for (const auto& [k, v] : ckpt.metadata) {
    w.String(k);
    w.String(v);
  }
  w.U64(static_cast<uint64_t>(ckpt.params.size()));
  w.F64s(ckpt.params.data(), static_cast<size_t>(ckpt.params.size()));
  internal::WriteFileAtomic(path, w.bytes());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingCheckpoint,
                "no checkpoint at " + path.string());
  }
  internal::ByteReader r(internal::ReadFile(path));
  if (r.remaining() < kMagicLen || r.Raw(kMagicLen) != kMagic) {
    throw Error(ErrorCode::kVersionMismatch,
                path.string() + " is not an SBCKPT01 checkpoint");
  }
  Checkpoint c;
  c.arch_hash = r.U64();
  c.kind = r.String();
  c.horizon = static_cast<int>(r.U32());
  c.transition_dim = static_cast<int>(r.U32());
  const uint32_t n_arch = r.U32();
  if (n_arch > 64) throw Error(ErrorCode::kShapeMismatch, "bad arch block");
  for (uint32_t i = 0; i < n_arch; ++i) {
    c.arch.push_back(static_cast<int>(r.U32()));
  }
  const uint32_t n_meta = r.U32();
  for (uint32_t i = 0; i < n_meta; ++i) {
    std::string k = r.String();
    c.metadata[k] = r.String();
  }
  const uint64_t n = r.U64();
  if (n * sizeof(double) > r.remaining()) {
    throw Error(ErrorCode::kTruncatedFile, "checkpoint payload truncated");
  }
  c.params.resize(static_cast<Eigen::Index>(n));
  r.F64s(c.params.data(), n);
  if (!r.AtEnd()) {
    throw Error(ErrorCode::kShapeMismatch, "trailing bytes in checkpoint");
  }
  return c;
}

Checkpoint MakeCheckpoint(const DenoiserNetwork& net,
                          std::map<std::string, std::string> metadata) {
  const DenoiserConfig& cfg = net.config();
  Checkpoint c;
  c.kind = "denoiser";
  c.arch_hash = cfg.ArchHash();
  c.horizon = cfg.horizon;
  c.transition_dim = cfg.transition_dim;
  c.arch = {cfg.widths[0], cfg.widths[1], cfg.widths[2], cfg.kernel,
            cfg.groups,    cfg.time_dim,  cfg.time_hidden};
  c.metadata = std::move(metadata);
  c.params = net.params();
  return c;
}

Checkpoint MakeCheckpoint(const PriorNetwork& net,
                          std::map<std::string, std::string> metadata) {
  Checkpoint c;
  c.kind = "prior";
  c.arch_hash = net.ArchHash();
  c.horizon = net.horizon();
  c.transition_dim = net.transition_dim();
  c.metadata = std::move(metadata);
  c.params = net.params();
  return c;
}

DenoiserNetwork DenoiserFromCheckpoint(const Checkpoint& ckpt) {
  if (ckpt.kind != "denoiser" || ckpt.arch.size() != 7) {
    throw Error(ErrorCode::kCheckpointMismatch,
                "checkpoint kind '" + ckpt.kind + "' is not a denoiser");
  }
  DenoiserConfig cfg;
  cfg.horizon = ckpt.horizon;
  cfg.transition_dim = ckpt.transition_dim;
  cfg.widths = {ckpt.arch[0], ckpt.arch[1], ckpt.arch[2]};
  cfg.kernel = ckpt.arch[3];
  cfg.groups = ckpt.arch[4];
  cfg.time_dim = ckpt.arch[5];
  cfg.time_hidden = ckpt.arch[6];
  if (cfg.ArchHash() != ckpt.arch_hash) {
    throw Error(ErrorCode::kCheckpointMismatch, "architecture hash mismatch");
  }
  DenoiserNetwork net(cfg);
  if (ckpt.params.size() != net.num_params()) {
    throw Error(ErrorCode::kCheckpointMismatch, "parameter count mismatch");
  }
  net.params() = ckpt.params;
  return net;
}

PriorNetwork PriorFromCheckpoint(const Checkpoint& ckpt) {
  if (ckpt.kind != "prior") {
    throw Error(ErrorCode::kCheckpointMismatch,
                "checkpoint kind '" + ckpt.kind + "' is not a prior network");
  }
  PriorNetwork net(ckpt.horizon, ckpt.transition_dim);
  if (net.ArchHash() != ckpt.arch_hash ||
      ckpt.params.size() != net.num_params()) {
    throw Error(ErrorCode::kCheckpointMismatch, "prior architecture mismatch");
  }
  net.params() = ckpt.params;
  return net;
}

}  // namespace sbplan
