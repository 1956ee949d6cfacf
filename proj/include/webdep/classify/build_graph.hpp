#pragma once

#include "webdep/classify/classify.hpp"
#include "webdep/core/graph.hpp"
#include "webdep/ingest/snapshot.hpp"

namespace webdep {

// Assembles the dependency graph from a snapshot and its classification.
// Every website becomes a node; every third-party provider becomes a node.
// Edges link a website (or a third-party provider) to the third-party
// providers it was observed using. Private, unknown and self-hosted labels
// produce no edge.
//
// Throws kDuplicateDomain, kDanglingReference (a website without a
// classification entry, or a label without a verdict) and kInvalidGraph.
DependencyGraph build_graph(const Snapshot& snapshot, const ClassificationResult& classification);

}  // namespace webdep
