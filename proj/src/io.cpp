#include "jrr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jrr {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_beta(double beta_omegaI) {
  return is_infinite(beta_omegaI) ? "INFINITE" : format_g17(beta_omegaI);
}

std::string model_name(TrajectoryModel m) {
  switch (m) {
    case TrajectoryModel::CLASSICAL_AL: return "classical-al";
    case TrajectoryModel::AMENDED_SPECTRAL: return "amended";
    case TrajectoryModel::AMENDED_VOLTERRA: return "volterra";
  }
  return "unknown";
}

std::string stats_name(FieldStatistics s) {
  return s == FieldStatistics::QUANTUM ? "quantum" : "classical";
}

std::string kernel_csv(const KernelTable& table) {
  std::ostringstream out;
  out << "tau,D,err\n";
  for (std::size_t i = 0; i < table.taus.size(); ++i)
    out << format_g17(table.taus[i]) << ',' << format_g17(table.values[i]) << ','
        << format_g17(table.err_estimates[i]) << '\n';
  return out.str();
}

std::string spectrum_csv(const std::vector<SpectrumSample>& samples) {
  std::ostringstream out;
  // complex-plane samples carry Re z in the omega column; the full point is
  // recorded in a comment row (schema note in the README)
  for (const auto& s : samples)
    if (s.z)
      out << "# z = " << format_g17(s.z->real()) << " + " << format_g17(s.z->imag())
          << "i\n";
  out << "omega,re_mu,im_mu,re_err,im_err,stats\n";
  for (const auto& s : samples) {
    const double w = s.omega ? *s.omega : s.z->real();
    out << format_g17(w) << ',' << format_g17(s.re_mu) << ',' << format_g17(s.im_mu)
        << ',' << format_g17(s.re_err) << ',' << format_g17(s.im_err) << ','
        << stats_name(s.stats) << '\n';
  }
  return out.str();
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream out;
  out << "# model = " << model_name(tr.model) << '\n';
  out << "# time_unit = " << tr.time_unit << '\n';
  for (const auto& [k, v] : tr.meta) out << "# " << k << " = " << v << '\n';
  out << "t,r\n";
  for (std::size_t i = 0; i < tr.ts.size(); ++i)
    out << format_g17(tr.ts[i]) << ',' << format_g17(tr.rs[i]) << '\n';
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace jrr
