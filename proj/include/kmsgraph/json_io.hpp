#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "kmsgraph/graph.hpp"
#include "kmsgraph/kms.hpp"
#include "kmsgraph/oracle.hpp"
#include "kmsgraph/spectral.hpp"

namespace kmsgraph {

/// Numeric text used everywhere a double leaves the library: %.15g with
/// negative zero collapsed.  Throws InternalError on non-finite input;
/// infinities are represented upstream as the strings "inf" / "-inf".
std::string format_double(double x);

/// Deterministic serialization: object keys in byte order, doubles through
/// format_double, no whitespace.  Same value, same bytes, every platform.
std::string canonical_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const DirectedGraph& g, const std::vector<double>& by_vertex);

nlohmann::json state_to_json(const DirectedGraph& g, const KmsStateDescriptor& state);

nlohmann::json report_to_json(const VerificationReport& report);

nlohmann::json beta_range_to_json(const DirectedGraph& g, const BetaRangeReport& report);

nlohmann::json spectral_to_json(const SpectralReport& report);

/// Reads a vertex-indexed nonnegative vector {"name": value, ...}; every
/// vertex of the graph must appear exactly once.
std::vector<double> vector_from_json(const DirectedGraph& g, const nlohmann::json& j);

}  // namespace kmsgraph
