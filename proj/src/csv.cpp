#include "oul1/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace oul1 {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_brief(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.7g", v);
  return buf;
}

std::string comment_header(const ConfigEcho& echo) {
  std::string out;
  for (const auto& [key, value] : echo) out += "# " + key + " = " + value + "\n";
  return out;
}

void write_path_csv(const std::string& file, const SamplePath& path,
                    const std::string& value_name, const ConfigEcho& echo) {
  std::string body = comment_header(echo);
  body += "t," + value_name + "\n";
  for (Index i = 0; i < path.grid.size(); ++i)
    body += format_full(path.grid.point(i)) + "," + format_full(path.values[i]) + "\n";
  write_text_file(file, body);
}

void write_text_file(const std::string& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + file);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + file);
}

}  // namespace oul1
