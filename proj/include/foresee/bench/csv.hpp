#pragma once

#include <string>
#include <vector>

namespace foresee::bench {

// CSV with a fixed header and 17-significant-digit scientific formatting for
// numeric cells, so experiment outputs are byte-stable under a fixed seed.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void write_row(const std::vector<double>& values);
  // Mixed rows: strings are written verbatim.
  void write_row_raw(const std::vector<std::string>& cells);

  static std::string format(double v);

 private:
  struct Impl;
  Impl* impl_;
  std::size_t columns_;
};

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);
void ensure_directory(const std::string& path);

}  // namespace foresee::bench
