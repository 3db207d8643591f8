#include "cksvar/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cksvar/error.hpp"

namespace cksvar {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::from_chars(buf, buf + std::strlen(buf), back);
    if (back == v) return buf;
  }
  return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  out.push_back(field);
  return out;
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw Error(Error::Code::parse_error, std::string("csv: bad number '") + s + "' in " + what);
  return v;
}

long parse_long(const std::string& s, const char* what) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw Error(Error::Code::parse_error, std::string("csv: bad integer '") + s + "' in " + what);
  return v;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw Error(Error::Code::parse_error, std::string("csv: bad integer '") + s + "' in " + what);
  return v;
}

}  // namespace

std::string series_to_csv(const SeriesMatrix& m) {
  std::string out;
  const auto roles = m.roles.size() == static_cast<std::size_t>(m.d)
                         ? m.roles
                         : SeriesMatrix::default_roles(m.d);
  for (int j = 0; j < m.d; ++j) {
    if (j) out += ',';
    out += roles[j];
  }
  out += '\n';
  for (int t = 0; t < m.n; ++t) {
    for (int j = 0; j < m.d; ++j) {
      if (j) out += ',';
      out += format_full(m(t, j));
    }
    out += '\n';
  }
  return out;
}

SeriesMatrix series_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw Error(Error::Code::parse_error, "csv: empty series file");
  const auto header = split_line(line);
  const int d = static_cast<int>(header.size());
  std::vector<double> values;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (static_cast<int>(fields.size()) != d)
      throw Error(Error::Code::parse_error,
                  "csv: row " + std::to_string(n + 1) + " has " +
                      std::to_string(fields.size()) + " fields, expected " + std::to_string(d));
    for (const auto& f : fields) values.push_back(parse_double(f, "series"));
    ++n;
  }
  if (n == 0) throw Error(Error::Code::parse_error, "csv: series file has no data rows");
  SeriesMatrix m(n, d);
  m.values = std::move(values);
  m.roles = header;
  return m;
}

std::string critval_table_to_csv(const CritValTable& table) {
  CritValTable sorted = table;
  sorted.sort_rows();
  std::string out = "variant,q0,tau,alpha,w0_init,crit,accepted,total,grid,seed\n";
  for (const CritValRow& r : sorted.rows) {
    out += variant_name(r.variant);
    out += ',' + std::to_string(r.q0);
    out += ',' + format_short(r.tau);
    out += ',' + format_short(r.alpha);
    out += ',' + format_short(r.w0_init);
    out += ',' + format_full(r.crit_value);
    out += ',' + std::to_string(r.accepted_draws);
    out += ',' + std::to_string(r.total_draws);
    out += ',' + std::to_string(r.grid);
    out += ',' + std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

CritValTable critval_table_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw Error(Error::Code::parse_error, "csv: empty critical-value table");
  CritValTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 10)
      throw Error(Error::Code::parse_error, "csv: critical-value rows need 10 fields");
    CritValRow row;
    row.variant = variant_from_name(f[0]);
    row.q0 = static_cast<int>(parse_long(f[1], "critvals"));
    row.tau = parse_double(f[2], "critvals");
    row.alpha = parse_double(f[3], "critvals");
    row.w0_init = parse_double(f[4], "critvals");
    row.crit_value = parse_double(f[5], "critvals");
    row.accepted_draws = parse_long(f[6], "critvals");
    row.total_draws = parse_long(f[7], "critvals");
    row.grid = static_cast<int>(parse_long(f[8], "critvals"));
    row.seed = parse_u64(f[9], "critvals");
    table.rows.push_back(row);
  }
  return table;
}

std::string test_outcome_csv_header() {
  return "variant,q0,lambda,crit,alpha,tau,frac_plus,reject";
}

std::string test_outcome_csv_row(const TestOutcome& o) {
  std::string out = variant_name(o.variant);
  out += ',' + std::to_string(o.q0);
  out += ',' + format_full(o.lambda_stat);
  out += ',' + format_full(o.crit_value);
  out += ',' + format_short(o.alpha);
  out += ',' + format_short(o.tau);
  out += ',' + format_short(o.occupation.frac_plus);
  out += ',' + std::string(o.reject ? "1" : "0");
  return out;
}

std::string mc_cells_to_csv(const std::vector<McCell>& cells) {
  std::string out = "design,n,q0,variant,rejection_rate,reps,mean_discards\n";
  for (const McCell& c : cells) {
    out += design_name(c.design);
    out += ',' + std::to_string(c.n);
    out += ',' + std::to_string(c.q0);
    out += ',' + std::string(variant_name(c.variant));
    out += ',' + format_short(c.rejection_rate);
    out += ',' + std::to_string(c.reps_used);
    out += ',' + format_short(c.mean_discards_per_rep);
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Code::io_error, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Code::io_error, "cannot write " + path);
  out << text;
  out.close();
  if (!out) throw Error(Error::Code::io_error, "write failed for " + path);
}

void write_series_csv(const std::string& path, const SeriesMatrix& m) {
  write_text_file(path, series_to_csv(m));
}

SeriesMatrix read_series_csv(const std::string& path) {
  return series_from_csv(read_text_file(path));
}

void write_critval_csv(const std::string& path, const CritValTable& table) {
  write_text_file(path, critval_table_to_csv(table));
}

void write_mc_csv(const std::string& path, const std::vector<McCell>& cells) {
  write_text_file(path, mc_cells_to_csv(cells));
}

CritValTable read_critval_csv(const std::string& path) {
  return critval_table_from_csv(read_text_file(path));
}

}  // namespace cksvar
