#include "genus/report.hpp"

#include <cstdio>

namespace genus {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

// nlohmann::json objects keep keys sorted, so dump() is canonical.
std::string spec_hash(const json& spec) { return fnv1a_hex(spec.dump()); }

void write_trace_csv(std::ostream& out, const ObservationTrace& trace) {
  out << 't';
  for (EdgeId e : trace.probe.edges) out << ',' << e;
  out << '\n';
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out << trace.times[i];
    for (Eigen::Index j = 0; j < trace.y[i].size(); ++j) out << ',' << format_double(trace.y[i][j]);
    out << '\n';
  }
}

void write_edge_vector_csv(std::ostream& out, const EdgeVector& x) {
  out << "edge,value\n";
  for (Eigen::Index e = 0; e < x.size(); ++e) out << e << ',' << format_double(x[e]) << '\n';
}

json instrumentation_to_json(const DecayInstrumentation& inst) {
  json steps = json::array();
  for (std::size_t s = 0; s < inst.smooth_norm.size(); ++s) {
    steps.push_back({{"t", s},
                     {"smooth_norm", inst.smooth_norm[s]},
                     {"error_norm", inst.error_norm[s]},
                     {"old_error", inst.old_error[s]},
                     {"new_error", inst.new_error[s]},
                     {"excited", inst.excited[s]}});
  }
  return json{{"steps", std::move(steps)},
              {"max_xw_residual", inst.max_xw_residual},
              {"max_smooth_drift", inst.max_smooth_drift}};
}

json basis_to_json(const SmoothBasis& basis) {
  json vectors = json::array();
  for (int k = 0; k < basis.dimension; ++k) {
    const Eigen::VectorXd col = basis.vectors.col(k);
    vectors.push_back(std::vector<double>(col.data(), col.data() + col.size()));
  }
  return json{{"dimension", basis.dimension}, {"edges", basis.vectors.rows()}, {"vectors", std::move(vectors)}};
}

json to_json(const EstimateConfig& c) {
  return json{{"mode", c.mode == EstimateMode::PaperFaithful ? "paper" : "practical"},
              {"n_bar", c.n_bar},
              {"g_bar", c.g_bar},
              {"m0", c.m0},
              {"p", c.p},
              {"N", c.N},
              {"T_prime", c.T_prime},
              {"T", c.T},
              {"epsilon", c.epsilon},
              {"log_epsilon", c.log_epsilon},
              {"epsilon_underflow", c.epsilon_underflow}};
}

json to_json(const GenusEstimate& e) {
  json out{{"success", e.success},
           {"k", e.k},
           {"selected", e.selected},
           {"hull_far_count", e.hull_far_count},
           {"pivot_norms", e.pivot_norms}};
  out["genus"] = e.success ? json(e.genus) : json(nullptr);
  if (!e.failure_reason.empty()) out["failure_reason"] = e.failure_reason;
  if (!e.warning.empty()) out["warning"] = e.warning;
  return out;
}

json to_json(const ErrorBudget& b) {
  return json{{"error_probability_bound", b.error_probability_bound},
              {"old_error_bound", b.old_error_bound},
              {"new_error_probability", b.new_error_probability},
              {"new_error_bound", b.new_error_bound},
              {"recommended_lag", b.recommended_lag},
              {"selection_union_bound", b.selection_union_bound},
              {"single_excitation_probability", b.single_excitation_probability}};
}

}  // namespace genus
