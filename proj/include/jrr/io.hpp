#pragma once

#include <string>
#include <vector>

#include "jrr/dynamics.hpp"
#include "jrr/flo.hpp"
#include "jrr/kernel.hpp"
#include "jrr/spectrum.hpp"

namespace jrr {

// 17 significant digits, round-trip exact, deterministic across reruns
std::string format_g17(double x);
// beta fields print as the literal INFINITE at zero temperature
std::string format_beta(double beta_omegaI);

std::string model_name(TrajectoryModel m);
std::string stats_name(FieldStatistics s);

// CSV bodies, LF line endings
std::string kernel_csv(const KernelTable& table);
std::string spectrum_csv(const std::vector<SpectrumSample>& samples);
std::string trajectory_csv(const Trajectory& tr);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace jrr
