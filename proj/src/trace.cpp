#include "dgdmax/trace.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dgdmax {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

namespace {

double parse_cell_double(const std::string& cell) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw std::runtime_error("trace: malformed number '" + cell + "'");
  return v;
}

long parse_cell_long(const std::string& cell) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw std::runtime_error("trace: malformed integer '" + cell + "'");
  return v;
}

}  // namespace

void write_trace_header(std::ostream& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << kTraceColumns << '\n';
}

void write_trace_row(std::ostream& out, const TraceRow& r) {
  out << r.t << ',' << format_double(r.prox_grad_P) << ','
      << (r.prox_grad_p ? format_double(*r.prox_grad_p) : std::string()) << ','
      << format_double(r.consensus_x) << ',' << format_double(r.consensus_x_scaled) << ','
      << format_double(r.lambda_grad) << ',' << (r.lambda_grad_is_surrogate ? 1 : 0) << ','
      << format_double(r.tracking_residual) << ',' << r.subsolver_iters << ','
      << format_double(r.delta_t) << ',' << format_double(r.wall_ms) << '\n';
}

void write_trace(std::ostream& out, const Trace& trace) {
  write_trace_header(out, trace.comments);
  for (const auto& r : trace.rows) write_trace_row(out, r);
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      trace.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    if (!header_seen) {
      if (line != kTraceColumns) throw std::runtime_error("trace: unexpected column header");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 11) throw std::runtime_error("trace: expected 11 columns in '" + line + "'");
    TraceRow r;
    r.t = parse_cell_long(cells[0]);
    r.prox_grad_P = parse_cell_double(cells[1]);
    if (!cells[2].empty()) r.prox_grad_p = parse_cell_double(cells[2]);
    r.consensus_x = parse_cell_double(cells[3]);
    r.consensus_x_scaled = parse_cell_double(cells[4]);
    r.lambda_grad = parse_cell_double(cells[5]);
    r.lambda_grad_is_surrogate = parse_cell_long(cells[6]) != 0;
    r.tracking_residual = parse_cell_double(cells[7]);
    r.subsolver_iters = parse_cell_long(cells[8]);
    r.delta_t = parse_cell_double(cells[9]);
    r.wall_ms = parse_cell_double(cells[10]);
    trace.rows.push_back(r);
  }
  if (!header_seen) throw std::runtime_error("trace: missing column header");
  return trace;
}

}  // namespace dgdmax
