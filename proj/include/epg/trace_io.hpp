// trace_io.hpp — trace CSV emission and ingestion.
//
// Column order is fixed: step, op_kind, n_nodes, barcode, fve_node,
// fve_polyline, U_E, U_R, GC, total_energy, historical_cc. Numbers carry
// 17 significant digits so a read-back reproduces the builder's values
// exactly.
#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "epg/builder.hpp"
#include "epg/csv.hpp"

namespace epg {

inline const char* trace_csv_header() {
  return "step,op_kind,n_nodes,barcode,fve_node,fve_polyline,U_E,U_R,GC,total_energy,historical_cc";
}

inline void write_trace_csv(const std::vector<TraceRow>& rows, std::ostream& out) {
  out << trace_csv_header() << '\n';
  for (const auto& r : rows) {
    out << r.step << ',' << r.op_kind << ',' << r.n_nodes << ',' << r.barcode << ','
        << format_g17(r.fve_node) << ',' << format_g17(r.fve_polyline) << ','
        << format_g17(r.u_e) << ',' << format_g17(r.u_r) << ',' << format_g17(r.gc) << ','
        << format_g17(r.total_energy) << ',' << r.historical_cc << '\n';
  }
}

inline void write_trace_csv(const std::vector<TraceRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path);
  write_trace_csv(rows, out);
}

inline std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty trace CSV");
  if (line.ends_with("\r")) line.pop_back();
  if (line != trace_csv_header()) throw data_error("unexpected trace CSV header: " + line);
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != 11) throw data_error("malformed trace row: " + line);
    TraceRow r;
    auto num = [&](int c) {
      double v;
      if (!parse_double(cells[std::size_t(c)], v))
        throw data_error("bad number '" + cells[std::size_t(c)] + "' in trace row");
      return v;
    };
    r.step = long(num(0));
    r.op_kind = cells[1];
    r.n_nodes = long(num(2));
    r.barcode = cells[3];
    r.fve_node = num(4);
    r.fve_polyline = num(5);
    r.u_e = num(6);
    r.u_r = num(7);
    r.gc = num(8);
    r.total_energy = num(9);
    r.historical_cc = long(num(10));
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw data_error("trace CSV has no rows");
  return rows;
}

inline std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot read " + path);
  return read_trace_csv(in);
}

}  // namespace epg
