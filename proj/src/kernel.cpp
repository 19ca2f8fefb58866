#include "oul1/kernel.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oul1 {

namespace {

void require_unit_interval(double v, const char* name, bool closed_right) {
  const bool ok = v > 0.0 && (closed_right ? v <= 1.0 : v < 1.0);
  if (!ok) throw std::invalid_argument(std::string("Kernel: ") + name + " out of range");
}

// shortest decimal form that round-trips the value (H=0.7 stays 0.7)
void format_param(std::string* out, const char* name, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  *out += name;
  *out += "=";
  out->append(buf, res.ptr);
}

}  // namespace

Kernel Kernel::fbm(double hurst) {
  require_unit_interval(hurst, "H", false);
  Kernel k;
  k.type_ = KernelType::Fbm;
  k.hurst_ = hurst;
  return k;
}

Kernel Kernel::sub_fbm(double hurst) {
  require_unit_interval(hurst, "H", false);
  Kernel k;
  k.type_ = KernelType::SubFbm;
  k.hurst_ = hurst;
  return k;
}

Kernel Kernel::bi_fbm(double hurst, double kk) {
  require_unit_interval(hurst, "H", false);
  require_unit_interval(kk, "K", true);
  Kernel k;
  k.type_ = KernelType::BiFbm;
  k.hurst_ = hurst;
  k.bif_k_ = kk;
  return k;
}

Kernel Kernel::bm() {
  Kernel k;
  k.type_ = KernelType::Bm;
  return k;
}

Kernel Kernel::tabulated(Vector times, Matrix cov) {
  if (times.size() < 1) throw std::invalid_argument("Kernel: tabulated grid is empty");
  if (cov.rows() != cov.cols() || cov.rows() != times.size())
    throw std::invalid_argument("Kernel: tabulated matrix shape does not match grid");
  for (Index i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("Kernel: tabulated times must be strictly increasing");
  const double scale = cov.cwiseAbs().maxCoeff();
  for (Index i = 0; i < cov.rows(); ++i) {
    if (cov(i, i) < 0.0) throw std::invalid_argument("Kernel: tabulated diagonal must be nonnegative");
    for (Index j = 0; j < i; ++j)
      if (std::abs(cov(i, j) - cov(j, i)) > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument("Kernel: tabulated matrix must be symmetric");
  }
  Kernel k;
  k.type_ = KernelType::Tabulated;
  k.tab_times_ = std::move(times);
  k.tab_cov_ = std::move(cov);
  // symmetrize exactly so kernel_eval(s,t) == kernel_eval(t,s) bit for bit
  k.tab_cov_ = ((k.tab_cov_ + k.tab_cov_.transpose()) / 2.0).eval();
  return k;
}

std::optional<double> Kernel::roughness() const {
  switch (type_) {
    case KernelType::Fbm:
    case KernelType::SubFbm:
      return hurst_;
    case KernelType::BiFbm:
      return hurst_ * bif_k_;
    case KernelType::Bm:
      return 0.5;
    case KernelType::Tabulated:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string Kernel::spec_string() const {
  std::string s;
  switch (type_) {
    case KernelType::Fbm:
      s = "fbm:";
      format_param(&s, "H", hurst_);
      return s;
    case KernelType::SubFbm:
      s = "subfbm:";
      format_param(&s, "H", hurst_);
      return s;
    case KernelType::BiFbm:
      s = "bifbm:";
      format_param(&s, "H", hurst_);
      s += ",";
      format_param(&s, "K", bif_k_);
      return s;
    case KernelType::Bm:
      return "bm";
    case KernelType::Tabulated:
      return tab_source_.empty() ? "tabulated:<inline>" : "tabulated:" + tab_source_;
  }
  return "?";
}

namespace {

Index tabulated_index(const Vector& times, double t) {
  const double span = std::max(1.0, std::abs(times[times.size() - 1]));
  const double tol = 1e-9 * span;
  // declared grids are small; linear scan keeps the tolerance logic simple
  for (Index i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= tol) return i;
  throw std::domain_error("kernel_eval: time not on the tabulated grid");
}

}  // namespace

double kernel_eval(const Kernel& kernel, double s, double t) {
  if (s < 0.0 || t < 0.0) throw std::domain_error("kernel_eval: negative time");
  switch (kernel.type()) {
    case KernelType::Fbm: {
      const double h2 = 2.0 * kernel.hurst();
      if (h2 == 1.0) return std::min(s, t);  // exact fBm(1/2) == BM coincidence
      return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
    }
    case KernelType::SubFbm: {
      const double h2 = 2.0 * kernel.hurst();
      return std::pow(s, h2) + std::pow(t, h2) -
             0.5 * (std::pow(s + t, h2) + std::pow(std::abs(t - s), h2));
    }
    case KernelType::BiFbm: {
      const double h2 = 2.0 * kernel.hurst();
      const double kk = kernel.bifractional_k();
      return std::pow(2.0, -kk) *
             (std::pow(std::pow(t, h2) + std::pow(s, h2), kk) -
              std::pow(std::abs(t - s), h2 * kk));
    }
    case KernelType::Bm:
      return std::min(s, t);
    case KernelType::Tabulated: {
      const Index i = tabulated_index(kernel.tabulated_times(), s);
      const Index j = tabulated_index(kernel.tabulated_times(), t);
      return kernel.tabulated_cov()(i, j);
    }
  }
  throw std::logic_error("kernel_eval: unknown kernel type");
}

Matrix covariance_matrix(const Kernel& kernel, const TimeGrid& grid) {
  const Index m = grid.size();
  Matrix cov(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j <= i; ++j) {
      const double v = kernel_eval(kernel, grid.point(i), grid.point(j));
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  return cov;
}

namespace {

double parse_double(const std::string& text, const std::string& context) {
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("kernel spec: cannot parse number '" + text + "' in " + context);
  }
}

// key=value[,key=value...] after the family tag
void parse_params(const std::string& body, const std::string& spec,
                  double* hurst, double* kk) {
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("kernel spec: expected key=value in '" + spec + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    if (key == "H" || key == "h") {
      if (hurst == nullptr) throw std::invalid_argument("kernel spec: unexpected H in '" + spec + "'");
      *hurst = parse_double(val, spec);
      hurst = nullptr;
    } else if (key == "K" || key == "k") {
      if (kk == nullptr) throw std::invalid_argument("kernel spec: unexpected K in '" + spec + "'");
      *kk = parse_double(val, spec);
      kk = nullptr;
    } else {
      throw std::invalid_argument("kernel spec: unknown parameter '" + key + "' in '" + spec + "'");
    }
  }
  if (hurst != nullptr) throw std::invalid_argument("kernel spec: missing H in '" + spec + "'");
  if (kk != nullptr) throw std::invalid_argument("kernel spec: missing K in '" + spec + "'");
}

Kernel load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("kernel spec: cannot open tabulated file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell, path));
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw std::invalid_argument("kernel spec: tabulated file needs a time row and matrix rows");
  const size_t m = rows[0].size();
  if (rows.size() != m + 1)
    throw std::invalid_argument("kernel spec: tabulated file must have one matrix row per grid time");
  Vector times(static_cast<Index>(m));
  for (size_t i = 0; i < m; ++i) times[static_cast<Index>(i)] = rows[0][i];
  Matrix cov(static_cast<Index>(m), static_cast<Index>(m));
  for (size_t i = 0; i < m; ++i) {
    if (rows[i + 1].size() != m)
      throw std::invalid_argument("kernel spec: ragged tabulated matrix row");
    for (size_t j = 0; j < m; ++j) cov(static_cast<Index>(i), static_cast<Index>(j)) = rows[i + 1][j];
  }
  return Kernel::tabulated(std::move(times), std::move(cov));
}

}  // namespace

Kernel parse_kernel_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string tag = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (tag == "bm") {
    if (!body.empty()) throw std::invalid_argument("kernel spec: bm takes no parameters");
    return Kernel::bm();
  }
  if (tag == "fbm") {
    double h = 0.0;
    parse_params(body, spec, &h, nullptr);
    return Kernel::fbm(h);
  }
  if (tag == "subfbm") {
    double h = 0.0;
    parse_params(body, spec, &h, nullptr);
    return Kernel::sub_fbm(h);
  }
  if (tag == "bifbm") {
    double h = 0.0, kk = 0.0;
    parse_params(body, spec, &h, &kk);
    return Kernel::bi_fbm(h, kk);
  }
  if (tag == "tabulated") {
    if (body.empty()) throw std::invalid_argument("kernel spec: tabulated needs a file path");
    Kernel k = load_tabulated_csv(body);
    k.tab_source_ = body;
    return k;
  }
  throw std::invalid_argument("kernel spec: unknown kernel family '" + tag + "'");
}

}  // namespace oul1
