#pragma once
// Output helpers shared by the exporters: fixed 17-significant-digit number
// formatting (byte-reproducible) and a minimal CSV writer.

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace motility {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t columns_;
};

}  // namespace motility
