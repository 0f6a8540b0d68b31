#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ritz/krylov.hpp"

namespace ritz {

// CSV schema shared by the run command and the plot command. Numbers are
// serialized with 17 significant digits; '\n' line endings.
extern const char* const kTraceHeader;

void write_trace(std::ostream& out, const std::vector<IterationRecord>& trace);
void write_trace_file(const std::string& path, const std::vector<IterationRecord>& trace);

std::vector<IterationRecord> read_trace(std::istream& in);
std::vector<IterationRecord> read_trace_file(const std::string& path);

// Emits three gnuplot scripts next to the trace: znorm_sq vs iteration
// (log-y), K/sigma^2 with its bounds, and tau.
std::vector<std::string> emit_plot_scripts(const std::string& trace_path,
                                           const std::string& out_dir);

}  // namespace ritz
