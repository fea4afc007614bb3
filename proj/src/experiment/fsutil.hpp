#pragma once

#include <string>

namespace tabguard {

std::string read_file(const std::string& path);

// Writes to a sibling temp file, then renames over the target, so a report
// or manifest is never observable half-written.
void write_file_atomic(const std::string& path, const std::string& content);

void ensure_dir(const std::string& path);

bool file_exists(const std::string& path);

}  // namespace tabguard
