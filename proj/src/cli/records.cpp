#include "symmoments/cli/records.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace symmoments::cli {

namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

std::string render(const Field& field, Format format) {
  const bool json = format == Format::json;
  return std::visit(
      Overloaded{
          [&](std::monostate) { return std::string(json ? "null" : ""); },
          [](bool b) { return std::string(b ? "true" : "false"); },
          [](std::uint64_t n) { return std::to_string(n); },
          [&](double x) { return std::isfinite(x) ? format_number(x) : std::string(json ? "null" : ""); },
          [&](const std::string& s) { return json ? json_quote(s) : csv_cell(s); },
          [&](const std::vector<double>& xs) {
            std::string out = json ? "[" : "";
            for (std::size_t i = 0; i < xs.size(); ++i) {
              if (i > 0) out += json ? "," : ";";
              out += std::isfinite(xs[i]) ? format_number(xs[i]) : std::string(json ? "null" : "");
            }
            if (json) out += "]";
            return out;
          },
      },
      field);
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, res.ptr);
}

std::string json_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string csv_cell(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void RecordWriter::write(const Record& record) {
  if (format_ == Format::json) {
    out_ << '{';
    for (std::size_t i = 0; i < record.fields.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << json_quote(record.fields[i].first) << ':' << render(record.fields[i].second, format_);
    }
    out_ << "}\n";
    return;
  }
  if (header_.empty()) {
    for (std::size_t i = 0; i < record.fields.size(); ++i) {
      header_.push_back(record.fields[i].first);
      out_ << (i > 0 ? "," : "") << csv_cell(header_.back());
    }
    out_ << "\r\n";
  }
  if (record.fields.size() != header_.size()) {
    throw std::logic_error("RecordWriter: record does not match the CSV header");
  }
  for (std::size_t i = 0; i < record.fields.size(); ++i) {
    if (record.fields[i].first != header_[i]) {
      throw std::logic_error("RecordWriter: record does not match the CSV header");
    }
    out_ << (i > 0 ? "," : "") << render(record.fields[i].second, format_);
  }
  out_ << "\r\n";
}

}  // namespace symmoments::cli
