#include "cksvar/model.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cksvar/error.hpp"

namespace cksvar {

namespace {

constexpr double kCanonicalTol = 1e-10;

Mat three_block(const Mat& plus, const Mat& minus, const Mat& x) {
  Mat out(plus.rows, 2 + x.cols);
  out.set_block(0, 0, plus);
  out.set_block(0, 1, minus);
  out.set_block(0, 2, x);
  return out;
}

}  // namespace

Mat CksvarParams::Phi0() const { return three_block(phi0_plus, phi0_minus, Phi0_x); }

Mat CksvarParams::Phi_lag(int i) const {
  return three_block(lag_phi_plus[i - 1], lag_phi_minus[i - 1], lag_Phi_x[i - 1]);
}

Mat CksvarParams::Phi0_pm(int sign) const {
  Mat out(p, p);
  out.set_block(0, 0, sign >= 0 ? phi0_plus : phi0_minus);
  out.set_block(0, 1, Phi0_x);
  return out;
}

Mat CksvarParams::Phi_lag_pm(int i, int sign) const {
  Mat out(p, p);
  out.set_block(0, 0, sign >= 0 ? lag_phi_plus[i - 1] : lag_phi_minus[i - 1]);
  out.set_block(0, 1, lag_Phi_x[i - 1]);
  return out;
}

void CksvarParams::validate() const {
  if (p < 1 || k < 0) throw Error(Error::Code::invalid_argument, "params: need p >= 1, k >= 0");
  auto check = [&](const Mat& m, int r, int c, const char* name) {
    if (m.rows != r || m.cols != c)
      throw Error(Error::Code::dimension_mismatch, std::string("params: bad shape for ") + name);
    if (!all_finite(m))
      throw Error(Error::Code::invalid_argument, std::string("params: non-finite ") + name);
  };
  check(phi0_plus, p, 1, "phi0_plus");
  check(phi0_minus, p, 1, "phi0_minus");
  check(Phi0_x, p, p - 1, "Phi0_x");
  check(c, p, 1, "c");
  check(Sigma_u, p, p, "Sigma_u");
  if (symmetry_gap(Sigma_u) > 1e-10 * std::max(1.0, max_abs(Sigma_u)))
    throw Error(Error::Code::invalid_argument, "params: Sigma_u not symmetric");
  if (static_cast<int>(lag_phi_plus.size()) != k || static_cast<int>(lag_phi_minus.size()) != k ||
      static_cast<int>(lag_Phi_x.size()) != k)
    throw Error(Error::Code::dimension_mismatch, "params: lag count != k");
  for (int i = 1; i <= k; ++i) {
    check(lag_phi_plus[i - 1], p, 1, "phi{i}_plus");
    check(lag_phi_minus[i - 1], p, 1, "phi{i}_minus");
    check(lag_Phi_x[i - 1], p, p - 1, "Phi{i}_x");
  }
}

Mat canonical_selector(int p) {
  Mat s(p, p + 1);
  s(0, 0) = 1.0;
  s(0, 1) = 1.0;
  for (int i = 1; i < p; ++i) s(i, i + 1) = 1.0;
  return s;
}

CksvarParams normalize_threshold(const CksvarParams& params) {
  if (params.b_threshold == 0.0) return params;
  CksvarParams out = params;
  const double b = params.b_threshold;
  // with y shifted by -b, the split terms pick up b * phi^{+-}(1) on each side
  Mat shift = params.phi0_plus + params.phi0_minus;
  for (int i = 1; i <= params.k; ++i)
    shift = shift - (params.lag_phi_plus[i - 1] + params.lag_phi_minus[i - 1]);
  out.c = params.c - b * shift;
  out.b_threshold = 0.0;
  return out;
}

CoherencyDiagnostics check_coherency(const CksvarParams& params) {
  params.validate();
  CoherencyDiagnostics d;
  const int p = params.p;
  d.det_plus = det(params.Phi0_pm(+1));
  d.det_minus = det(params.Phi0_pm(-1));
  const Mat xx = params.Phi0_x.block(1, 0, p - 1, p - 1);
  d.det_xx = det(xx);
  if (d.det_xx == 0.0) {
    d.reason = "Phi0_xx singular";
    return d;
  }
  const Mat yx = params.Phi0_x.block(0, 0, 1, p - 1);           // 1 x (p-1)
  const Mat xy_p = params.phi0_plus.block(1, 0, p - 1, 1);      // (p-1) x 1
  const Mat xy_m = params.phi0_minus.block(1, 0, p - 1, 1);
  const Mat xxinv = inverse(xx);
  d.schur_plus = params.phi0_plus(0, 0) - (yx * (xxinv * xy_p))(0, 0);
  d.schur_minus = params.phi0_minus(0, 0) - (yx * (xxinv * xy_m))(0, 0);
  if (d.det_plus == 0.0 || d.det_minus == 0.0)
    d.reason = "det Phi0^+- vanishes";
  else if ((d.det_plus > 0.0) != (d.det_minus > 0.0))
    d.reason = "det Phi0^+ and det Phi0^- have opposite signs";
  else if (d.schur_plus <= 0.0 || d.schur_minus <= 0.0)
    d.reason = "Schur complement not strictly positive";
  else
    d.ok = true;
  return d;
}

CanonicalForm to_canonical(const CksvarParams& params) {
  const CoherencyDiagnostics diag = check_coherency(params);
  if (!diag.ok)
    throw Error(Error::Code::coherency_violated, "to_canonical: " + diag.reason);
  const int p = params.p;
  const int k = params.k;

  const Mat xx = params.Phi0_x.block(1, 0, p - 1, p - 1);
  const Mat yx = params.Phi0_x.block(0, 0, 1, p - 1);
  const Mat xxinv = inverse(xx);
  const Mat yx_xxinv = yx * xxinv;  // 1 x (p-1)

  CanonicalForm cf;
  cf.P_inv = Mat(p + 1, p + 1);
  cf.P_inv(0, 0) = diag.schur_plus;
  cf.P_inv(1, 1) = diag.schur_minus;
  cf.P_inv.set_block(2, 0, params.phi0_plus.block(1, 0, p - 1, 1));
  cf.P_inv.set_block(2, 1, params.phi0_minus.block(1, 0, p - 1, 1));
  cf.P_inv.set_block(2, 2, xx);
  cf.P = inverse(cf.P_inv);

  cf.Q = Mat::identity(p);
  for (int j = 0; j < p - 1; ++j) cf.Q(0, 1 + j) = -yx_xxinv(0, j);

  CksvarParams t;
  t.p = p;
  t.k = k;
  auto transform = [&](const Mat& block) { return cf.Q * block * cf.P; };
  const Mat phi0t = transform(params.Phi0());
  t.phi0_plus = phi0t.col(0);
  t.phi0_minus = phi0t.col(1);
  t.Phi0_x = phi0t.block(0, 2, p, p - 1);
  for (int i = 1; i <= k; ++i) {
    const Mat phit = transform(params.Phi_lag(i));
    t.lag_phi_plus.push_back(phit.col(0));
    t.lag_phi_minus.push_back(phit.col(1));
    t.lag_Phi_x.push_back(phit.block(0, 2, p, p - 1));
  }
  t.c = cf.Q * params.c;
  t.Sigma_u = cf.Q * params.Sigma_u * transpose(cf.Q);
  t.b_threshold = 0.0;

  if (max_abs(phi0t - canonical_selector(p)) > kCanonicalTol)
    throw Error(Error::Code::coherency_violated,
                "to_canonical: transformed Phi0 is not the canonical selector");
  cf.params_tilde = std::move(t);
  return cf;
}

// ---------------------------------------------------------------------------
// parameter files: `key = value`, '#' comments, matrices as row-major lists
// in brackets with ',' (and optionally ';') separators.

namespace {

std::vector<double> parse_number_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::string tok;
  auto flush = [&]() {
    if (tok.empty()) return;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(Error::Code::parse_error, "params: bad number '" + tok + "' for key " + key);
    }
    tok.clear();
  };
  for (char ch : s) {
    if (ch == '[' || ch == ']' || ch == ',' || ch == ';' || std::isspace(static_cast<unsigned char>(ch)))
      flush();
    else
      tok += ch;
  }
  flush();
  return out;
}

Mat mat_from_values(const std::vector<double>& vals, int r, int c, const std::string& key) {
  if (static_cast<int>(vals.size()) != r * c)
    throw Error(Error::Code::parse_error,
                "params: key " + key + " expects " + std::to_string(r * c) + " entries, got " +
                    std::to_string(vals.size()));
  Mat m(r, c);
  m.data = vals;
  return m;
}

std::string format_matrix(const Mat& m) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (i + j > 0) os << (j == 0 ? "; " : ", ");
      os << m(i, j);
    }
  }
  os << "]";
  return os.str();
}

}  // namespace

CksvarParams parse_params_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (!kv.emplace(key, val).second)
      throw Error(Error::Code::parse_error, "params: duplicate key " + key);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(Error::Code::parse_error, "params: missing key " + key);
    return it->second;
  };

  CksvarParams out;
  const auto pv = parse_number_list(need("p"), "p");
  const auto kvv = parse_number_list(need("k"), "k");
  if (pv.size() != 1 || kvv.size() != 1)
    throw Error(Error::Code::parse_error, "params: p and k must be scalars");
  out.p = static_cast<int>(pv[0]);
  out.k = static_cast<int>(kvv[0]);
  if (out.p < 1 || out.k < 0) throw Error(Error::Code::parse_error, "params: need p >= 1, k >= 0");

  auto mat_key = [&](const std::string& key, int r, int c) {
    return mat_from_values(parse_number_list(need(key), key), r, c, key);
  };
  out.phi0_plus = mat_key("phi0_plus", out.p, 1);
  out.phi0_minus = mat_key("phi0_minus", out.p, 1);
  out.Phi0_x = mat_key("Phi0_x", out.p, out.p - 1);
  for (int i = 1; i <= out.k; ++i) {
    out.lag_phi_plus.push_back(mat_key("phi" + std::to_string(i) + "_plus", out.p, 1));
    out.lag_phi_minus.push_back(mat_key("phi" + std::to_string(i) + "_minus", out.p, 1));
    out.lag_Phi_x.push_back(mat_key("Phi" + std::to_string(i) + "_x", out.p, out.p - 1));
  }
  out.c = mat_key("c", out.p, 1);
  out.Sigma_u = mat_key("Sigma_u", out.p, out.p);
  if (kv.count("b")) {
    const auto bv = parse_number_list(kv.at("b"), "b");
    if (bv.size() != 1) throw Error(Error::Code::parse_error, "params: b must be a scalar");
    out.b_threshold = bv[0];
  }
  out = normalize_threshold(out);
  out.validate();
  return out;
}

std::string params_to_text(const CksvarParams& params) {
  std::ostringstream os;
  os << "p = " << params.p << "\n";
  os << "k = " << params.k << "\n";
  os << "phi0_plus = " << format_matrix(params.phi0_plus) << "\n";
  os << "phi0_minus = " << format_matrix(params.phi0_minus) << "\n";
  os << "Phi0_x = " << format_matrix(params.Phi0_x) << "\n";
  for (int i = 1; i <= params.k; ++i) {
    os << "phi" << i << "_plus = " << format_matrix(params.lag_phi_plus[i - 1]) << "\n";
    os << "phi" << i << "_minus = " << format_matrix(params.lag_phi_minus[i - 1]) << "\n";
    os << "Phi" << i << "_x = " << format_matrix(params.lag_Phi_x[i - 1]) << "\n";
  }
  os << "c = " << format_matrix(params.c) << "\n";
  os << "Sigma_u = " << format_matrix(params.Sigma_u) << "\n";
  return os.str();
}

CksvarParams read_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Code::io_error, "cannot open parameter file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_params_text(buf.str());
}

void write_params_file(const std::string& path, const CksvarParams& params) {
  std::ofstream out(path);
  if (!out) throw Error(Error::Code::io_error, "cannot write parameter file " + path);
  out << params_to_text(params);
  if (!out) throw Error(Error::Code::io_error, "write failed for " + path);
}

}  // namespace cksvar
