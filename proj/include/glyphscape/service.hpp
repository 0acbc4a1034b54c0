// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "glyphscape/error.hpp"
#include "glyphscape/mapping.hpp"
#include "glyphscape/scene.hpp"
#include "glyphscape/sprites.hpp"

namespace httplib {
class Server;
}

namespace glyphscape {

/// A conditional mutation named a revision that is no longer current.
class StaleRevisionError : public Error {
 public:
  StaleRevisionError(const std::string& what, std::uint64_t current) : Error(what), current_(current) {}
  std::uint64_t current() const noexcept { return current_; }

 private:
  std::uint64_t current_;
};

/// Immutable state one revision of the session exposes.
struct Snapshot {
  std::shared_ptr<const Dataset> data;
  ChannelMapping mapping;
  BoundScene scene;
  EdgeSet edges;
  std::shared_ptr<const SpriteAtlas> atlas;
  std::uint64_t revision = 0;
};

struct ViewRequest {
  int width = 800;
  int height = 800;
  LensParams lens;
};

/// One dataset, one mapping, a revision counter. Reads take a snapshot and
/// never block on writers; mutations are serialized and swap in a new
/// snapshot atomically.
class Session {
 public:
  Session(Dataset data, ChannelMapping mapping, std::shared_ptr<const SpriteAtlas> atlas = nullptr,
          std::vector<RawEdge> edges = {}, Light light = Light::standard());

  std::shared_ptr<const Snapshot> snapshot() const;
  std::uint64_t revision() const { return snapshot()->revision; }
  const Light& light() const { return light_; }

  /// Replaces one channel's bins with manual edges and rebinds.
  /// Channels: shape, leftArms, rightArms, edgeWidth.
  std::uint64_t set_bins(const std::string& channel, std::vector<double> edges,
                         std::optional<std::uint64_t> if_revision = std::nullopt);
  std::uint64_t set_mapping(ChannelMapping mapping, std::optional<std::uint64_t> if_revision = std::nullopt);

  Framebuffer render(const Snapshot& snap, const ViewRequest& view) const;
  std::string meta_json() const;
  std::string histogram_json(const std::string& column, int k) const;

 private:
  std::shared_ptr<const SpriteAtlas> atlas_for(int footprint);
  std::shared_ptr<const Snapshot> rebuild(ChannelMapping mapping, std::uint64_t revision);
  void check_revision(std::optional<std::uint64_t> if_revision) const;

  Light light_;
  std::shared_ptr<const Dataset> data_;
  std::vector<RawEdge> raw_edges_;
  std::optional<PcaResult> pca_cache_;
  std::map<int, std::shared_ptr<const SpriteAtlas>> atlases_;

  mutable std::mutex snap_mutex_;
  std::shared_ptr<const Snapshot> current_;
  std::mutex write_mutex_;
};

/// Registers the /api routes on `server`.
void install_routes(httplib::Server& server, Session& session);

/// Blocks serving on host:port until the server is stopped.
void serve(Session& session, const std::string& host, int port);

}  // namespace glyphscape
