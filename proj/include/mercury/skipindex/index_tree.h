// Copyright 2026 The Mercury Mini Authors.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mercury/common/predicate.h"
#include "mercury/skipindex/sketch.h"

namespace mercury {

enum class BlockClass : uint8_t { kNoneMatch, kMaybe, kAllMatch };

std::string_view BlockClassName(BlockClass c);

// Sound classification of the rows summarized by `sketch` under
// `column <op> literal`: kAllMatch only if every row matches, kNoneMatch only
// if none does.
BlockClass ClassifySketch(const Sketch& sketch, CompareOp op, const Value& literal);

// Block index over one column segment. Level 0 holds the per-block sketches in
// block order; every node above is the merge of up to `fanout` children, up to
// a single root.
class IndexTree {
 public:
  static constexpr size_t kDefaultFanout = 16;

  IndexTree() = default;
  explicit IndexTree(std::vector<Sketch> leaves, size_t fanout = kDefaultFanout);

  size_t fanout() const { return fanout_; }
  size_t leaf_count() const { return levels_.empty() ? 0 : levels_[0].size(); }
  size_t height() const { return levels_.size(); }
  const Sketch& node(size_t level, size_t index) const { return levels_[level][index]; }
  const Sketch& root() const { return levels_.back()[0]; }
  std::span<const Sketch> leaves() const { return levels_.empty() ? std::span<const Sketch>() : levels_[0]; }

  // [first, last) child indices on level - 1.
  std::pair<size_t, size_t> Children(size_t level, size_t index) const;
  // [first, last) leaf indices covered by a node.
  std::pair<size_t, size_t> LeafRange(size_t level, size_t index) const;

 private:
  size_t fanout_ = kDefaultFanout;
  std::vector<std::vector<Sketch>> levels_;
};

struct PruneResult {
  std::vector<BlockClass> classes;
  uint64_t nodes_visited = 0;
};

// Top-down classification; subtrees decided at an inner node are not visited.
PruneResult Prune(const IndexTree& tree, CompareOp op, const Value& literal);

// Conjunction of per-column predicates. trees[i] must index the column of
// preds[i], and all trees must share one block layout.
PruneResult PruneConjunction(std::span<const IndexTree* const> trees, std::span<const Comparison> preds,
                             size_t leaf_count);

struct SketchAggregateResult {
  AggState partial;
  std::vector<size_t> residual;  // blocks needing row-level evaluation
  uint64_t blocks_answered = 0;
  uint64_t blocks_skipped = 0;   // clean kNoneMatch blocks
};

// Answers `func` over `tree`'s column from sketches wherever a whole subtree is
// kAllMatch and free of dirty blocks. Dirty blocks are always residual.
SketchAggregateResult SketchAggregate(const IndexTree& tree, AggFunc func, std::span<const BlockClass> classes,
                                      const std::vector<bool>& dirty);
SketchAggregateResult SketchAggregate(const IndexTree& tree, AggFunc func,
                                      const std::optional<std::pair<CompareOp, Value>>& pred,
                                      const std::vector<bool>& dirty);

}  // namespace mercury
