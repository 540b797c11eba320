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

#include "mercury/skipindex/index_tree.h"

#include "mercury/common/error.h"

namespace mercury {

std::string_view BlockClassName(BlockClass c) {
  switch (c) {
    case BlockClass::kNoneMatch: return "None";
    case BlockClass::kMaybe: return "Maybe";
    case BlockClass::kAllMatch: return "All";
  }
  return "?";
}

BlockClass ClassifySketch(const Sketch& sketch, CompareOp op, const Value& literal) {
  if (!sketch.HasValues() || IsNull(literal)) return BlockClass::kNoneMatch;
  int lo = CompareValues(sketch.min, literal);  // min vs literal
  int hi = CompareValues(sketch.max, literal);  // max vs literal
  bool no_nulls = sketch.null_count == 0;
  auto all_or_maybe = [&] { return no_nulls ? BlockClass::kAllMatch : BlockClass::kMaybe; };
  switch (op) {
    case CompareOp::kEq:
      if (lo > 0 || hi < 0) return BlockClass::kNoneMatch;
      if (lo == 0 && hi == 0) return all_or_maybe();
      return BlockClass::kMaybe;
    case CompareOp::kNe:
      if (lo == 0 && hi == 0) return BlockClass::kNoneMatch;
      if (lo > 0 || hi < 0) return all_or_maybe();
      return BlockClass::kMaybe;
    case CompareOp::kLt:
      if (lo >= 0) return BlockClass::kNoneMatch;
      if (hi < 0) return all_or_maybe();
      return BlockClass::kMaybe;
    case CompareOp::kLe:
      if (lo > 0) return BlockClass::kNoneMatch;
      if (hi <= 0) return all_or_maybe();
      return BlockClass::kMaybe;
    case CompareOp::kGt:
      if (hi <= 0) return BlockClass::kNoneMatch;
      if (lo > 0) return all_or_maybe();
      return BlockClass::kMaybe;
    case CompareOp::kGe:
      if (hi < 0) return BlockClass::kNoneMatch;
      if (lo >= 0) return all_or_maybe();
      return BlockClass::kMaybe;
  }
  return BlockClass::kMaybe;
}

IndexTree::IndexTree(std::vector<Sketch> leaves, size_t fanout) : fanout_(fanout) {
  if (fanout < 2) throw Error(ErrorCode::kInvalidArgument, "index fanout must be at least 2");
  if (leaves.empty()) return;
  levels_.push_back(std::move(leaves));
  while (levels_.back().size() > 1) {
    const auto& below = levels_.back();
    std::vector<Sketch> above;
    above.reserve((below.size() + fanout - 1) / fanout);
    for (size_t i = 0; i < below.size(); i += fanout) {
      Sketch merged = below[i];
      for (size_t j = i + 1; j < std::min(below.size(), i + fanout); ++j) merged = MergeSketch(merged, below[j]);
      above.push_back(std::move(merged));
    }
    levels_.push_back(std::move(above));
  }
}

std::pair<size_t, size_t> IndexTree::Children(size_t level, size_t index) const {
  size_t first = index * fanout_;
  return {first, std::min(levels_[level - 1].size(), first + fanout_)};
}

std::pair<size_t, size_t> IndexTree::LeafRange(size_t level, size_t index) const {
  size_t span = 1;
  for (size_t l = 0; l < level; ++l) span *= fanout_;
  size_t first = index * span;
  return {first, std::min(leaf_count(), first + span)};
}

namespace {

template <typename ClassifyNode>
void PruneNode(const IndexTree& tree, size_t level, size_t index, ClassifyNode& classify, PruneResult* out) {
  ++out->nodes_visited;
  BlockClass c = classify(level, index);
  if (c != BlockClass::kMaybe || level == 0) {
    auto [first, last] = tree.LeafRange(level, index);
    for (size_t i = first; i < last; ++i) out->classes[i] = c;
    return;
  }
  auto [first, last] = tree.Children(level, index);
  for (size_t i = first; i < last; ++i) PruneNode(tree, level - 1, i, classify, out);
}

}  // namespace

PruneResult Prune(const IndexTree& tree, CompareOp op, const Value& literal) {
  PruneResult out;
  out.classes.assign(tree.leaf_count(), BlockClass::kMaybe);
  if (tree.height() == 0) return out;
  auto classify = [&](size_t level, size_t index) { return ClassifySketch(tree.node(level, index), op, literal); };
  PruneNode(tree, tree.height() - 1, 0, classify, &out);
  return out;
}

PruneResult PruneConjunction(std::span<const IndexTree* const> trees, std::span<const Comparison> preds,
                             size_t leaf_count) {
  PruneResult out;
  if (trees.size() != preds.size()) throw Error(ErrorCode::kInvalidArgument, "one index tree per predicate");
  if (preds.empty() || leaf_count == 0) {
    out.classes.assign(leaf_count, BlockClass::kAllMatch);
    return out;
  }
  for (const auto* t : trees) {
    if (t->leaf_count() != leaf_count) throw Error(ErrorCode::kInvalidArgument, "index trees differ in shape");
  }
  out.classes.assign(leaf_count, BlockClass::kMaybe);
  auto classify = [&](size_t level, size_t index) {
    bool all = true;
    for (size_t p = 0; p < preds.size(); ++p) {
      BlockClass c = ClassifySketch(trees[p]->node(level, index), preds[p].op, preds[p].literal);
      if (c == BlockClass::kNoneMatch) return BlockClass::kNoneMatch;
      all = all && c == BlockClass::kAllMatch;
    }
    return all ? BlockClass::kAllMatch : BlockClass::kMaybe;
  };
  PruneNode(*trees[0], trees[0]->height() - 1, 0, classify, &out);
  return out;
}

namespace {

struct AggWalk {
  const IndexTree& tree;
  AggFunc func;
  std::span<const BlockClass> classes;
  std::vector<size_t> all_prefix;    // # kAllMatch leaves before i
  std::vector<size_t> dirty_prefix;  // # dirty leaves before i
  SketchAggregateResult* out;

  void Visit(size_t level, size_t index) {
    auto [first, last] = tree.LeafRange(level, index);
    size_t n = last - first;
    bool clean = dirty_prefix[last] == dirty_prefix[first];
    if (clean && all_prefix[last] - all_prefix[first] == n) {
      out->partial.Merge(SketchToAggState(tree.node(level, index), func));
      out->blocks_answered += n;
      return;
    }
    if (level == 0) {
      if (clean && classes[first] == BlockClass::kNoneMatch) {
        ++out->blocks_skipped;
      } else {
        out->residual.push_back(first);
      }
      return;
    }
    auto [c0, c1] = tree.Children(level, index);
    for (size_t c = c0; c < c1; ++c) Visit(level - 1, c);
  }
};

}  // namespace

SketchAggregateResult SketchAggregate(const IndexTree& tree, AggFunc func, std::span<const BlockClass> classes,
                                      const std::vector<bool>& dirty) {
  SketchAggregateResult out;
  size_t n = tree.leaf_count();
  if (classes.size() != n || dirty.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "classification / dirty set must cover every block");
  }
  if (n == 0) return out;
  AggWalk walk{tree, func, classes, std::vector<size_t>(n + 1, 0), std::vector<size_t>(n + 1, 0), &out};
  for (size_t i = 0; i < n; ++i) {
    walk.all_prefix[i + 1] = walk.all_prefix[i] + (classes[i] == BlockClass::kAllMatch);
    walk.dirty_prefix[i + 1] = walk.dirty_prefix[i] + (dirty[i] ? 1 : 0);
  }
  walk.Visit(tree.height() - 1, 0);
  return out;
}

SketchAggregateResult SketchAggregate(const IndexTree& tree, AggFunc func,
                                      const std::optional<std::pair<CompareOp, Value>>& pred,
                                      const std::vector<bool>& dirty) {
  std::vector<BlockClass> classes;
  if (pred) {
    classes = Prune(tree, pred->first, pred->second).classes;
  } else {
    classes.assign(tree.leaf_count(), BlockClass::kAllMatch);
  }
  return SketchAggregate(tree, func, classes, dirty);
}

}  // namespace mercury
