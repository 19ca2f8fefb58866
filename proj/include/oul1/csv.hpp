#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oul1/sample_path.hpp"

namespace oul1 {

/// 17-significant-digit decimal form: round-trips any double exactly.
std::string format_full(double v);
/// 7-significant-digit form for human-facing summaries.
std::string format_brief(double v);

/// Ordered key/value pairs echoed at the top of every artifact the run writes.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// `# key = value` comment block used as the file preamble for CSV outputs.
std::string comment_header(const ConfigEcho& echo);

/// Path dump `t,<value_name>` with full-precision values after the preamble.
void write_path_csv(const std::string& file, const SamplePath& path,
                    const std::string& value_name, const ConfigEcho& echo);

void write_text_file(const std::string& file, const std::string& content);

}  // namespace oul1
