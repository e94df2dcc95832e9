#include "foresee/bench/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "foresee/errors.hpp"

namespace foresee::bench {

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : impl_(new Impl), columns_(columns.size()) {
  impl_->out.open(path, std::ios::binary);
  if (!impl_->out) {
    delete impl_;
    throw IoError("cannot open for writing: " + path);
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << columns[i];
  }
  impl_->out << '\n';
}

CsvWriter::~CsvWriter() { delete impl_; }

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void CsvWriter::write_row(const std::vector<double>& values) {
  if (values.size() != columns_) throw IoError("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << format(values[i]);
  }
  impl_->out << '\n';
}

void CsvWriter::write_row_raw(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw IoError("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << cells[i];
  }
  impl_->out << '\n';
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

}  // namespace foresee::bench
