#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace symmoments::cli {

enum class Format { json, csv };

/// A record field. Non-finite doubles are written as JSON null and as an
/// empty CSV cell; vectors as a JSON array or a ';'-joined CSV cell.
using Field = std::variant<std::monostate, bool, std::uint64_t, double, std::string, std::vector<double>>;

struct Record {
  std::vector<std::pair<std::string, Field>> fields;

  Record& add(std::string key, Field value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

/// Shortest decimal that round-trips to the same double.
std::string format_number(double x);

std::string json_quote(std::string_view s);
std::string csv_cell(std::string_view s);

/// Newline-delimited JSON objects, or CSV with a header row taken from the
/// first record. Every later CSV record must have the same keys.
class RecordWriter {
 public:
  RecordWriter(std::ostream& out, Format format) : out_(out), format_(format) {}

  void write(const Record& record);

 private:
  std::ostream& out_;
  Format format_;
  std::vector<std::string> header_;
};

}  // namespace symmoments::cli
