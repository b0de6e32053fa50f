#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dgdmax {

inline constexpr const char* kTraceColumns =
    "t,prox_grad_P,prox_grad_p,consensus_x,consensus_x_scaled,lambda_grad,"
    "lambda_grad_is_surrogate,tracking_residual,subsolver_iters,delta_t,wall_ms";

/// One row per round. consensus_x = ||X_perp||_F / sqrt(m); consensus_x_scaled
/// multiplies that by L. prox_grad_p is empty when the problem has no pooled oracle.
struct TraceRow {
  long t = 0;
  double prox_grad_P = 0.0;
  std::optional<double> prox_grad_p;
  double consensus_x = 0.0;
  double consensus_x_scaled = 0.0;
  double lambda_grad = 0.0;
  bool lambda_grad_is_surrogate = false;
  double tracking_residual = 0.0;
  long subsolver_iters = 0;
  double delta_t = 0.0;
  double wall_ms = 0.0;

  bool operator==(const TraceRow&) const = default;
};

struct Trace {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<TraceRow> rows;

  bool operator==(const Trace&) const = default;
};

void write_trace_header(std::ostream& out, const std::vector<std::string>& comments);
void write_trace_row(std::ostream& out, const TraceRow& row);
void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace dgdmax
