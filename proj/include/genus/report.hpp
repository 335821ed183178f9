#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "genus/circulation.hpp"
#include "genus/estimator.hpp"
#include "genus/simulator.hpp"

namespace genus {

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Hash of a spec document (its canonical compact dump, keys sorted).
std::string spec_hash(const nlohmann::json& spec);

/// Header "t,<edge id>,..." then one row per recorded time, %.17g values.
void write_trace_csv(std::ostream& out, const ObservationTrace& trace);

/// Rows "edge,value" for one vector, or "edge,<name>..." for several.
void write_edge_vector_csv(std::ostream& out, const EdgeVector& x);

/// One object per step: {t, smooth_norm, error_norm, old_error, new_error, excited}.
nlohmann::json instrumentation_to_json(const DecayInstrumentation& inst);

/// {"dimension": d, "edges": m, "vectors": [[...], ...]}, one list per basis vector.
nlohmann::json basis_to_json(const SmoothBasis& basis);

nlohmann::json to_json(const EstimateConfig& config);
nlohmann::json to_json(const GenusEstimate& estimate);
nlohmann::json to_json(const ErrorBudget& budget);

}  // namespace genus
