#include "frecl/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

namespace frecl::io {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw InputError("format_number: conversion failed");
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  if (first < last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw InputError("not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(cell);
  return out;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open '" + path + "'");
  return is;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void write_curves(std::ostream& os, const CurveSet& cs, const std::vector<std::string>& ids) {
  if (static_cast<Eigen::Index>(ids.size()) != cs.rows()) throw InputError("write_curves: id count mismatch");
  os << "id";
  for (Eigen::Index q = 0; q < cs.points(); ++q) os << ",t_" << format_number(cs.grid().points()(q));
  os << '\n';
  for (Eigen::Index i = 0; i < cs.rows(); ++i) {
    os << ids[static_cast<std::size_t>(i)];
    for (Eigen::Index q = 0; q < cs.points(); ++q) os << ',' << format_number(cs.values()(i, q));
    os << '\n';
  }
}

CurveTable read_curves(std::istream& is, const std::string& source) {
  std::string line;
  if (!std::getline(is, line)) fail(source, 1, "missing header");
  const auto header = split_line(line);
  if (header.size() < 3 || header[0] != "id") fail(source, 1, "header must be id,t_<v1>,...,t_<vT> with T >= 2");
  Vector points(static_cast<Eigen::Index>(header.size() - 1));
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].rfind("t_", 0) != 0) fail(source, 1, "column '" + header[c] + "' is not of the form t_<value>");
    try {
      points(static_cast<Eigen::Index>(c - 1)) = parse_number(header[c].substr(2));
    } catch (const InputError& e) {
      fail(source, 1, e.what());
    }
  }
  TimeGrid grid;
  try {
    grid = TimeGrid(points);
  } catch (const InputError& e) {
    fail(source, 1, e.what());
  }

  std::vector<std::string> ids;
  std::vector<double> flat;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      fail(source, lineno, "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(cells.size()));
    ids.push_back(cells[0]);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      double v = 0.0;
      try {
        v = parse_number(cells[c]);
      } catch (const InputError& e) {
        fail(source, lineno, e.what());
      }
      if (!std::isfinite(v)) fail(source, lineno, "missing or non-finite value");
      flat.push_back(v);
    }
  }
  const auto m = static_cast<Eigen::Index>(ids.size());
  const Eigen::Index t = grid.size();
  Matrix values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      flat.data(), m, t);
  return CurveTable{CurveSet(std::move(grid), std::move(values)), std::move(ids)};
}

void write_curves_file(const std::string& path, const CurveSet& cs, const std::vector<std::string>& ids) {
  auto os = open_out(path);
  write_curves(os, cs, ids);
}

CurveTable read_curves_file(const std::string& path) {
  auto is = open_in(path);
  return read_curves(is, path);
}

void write_partition(std::ostream& os, const Partition& p, const std::vector<std::string>& ids) {
  if (ids.size() != p.size()) throw InputError("write_partition: id count mismatch");
  os << "id,cluster\n";
  for (std::size_t i = 0; i < p.size(); ++i) os << ids[i] << ',' << p.label(i) + 1 << '\n';
}

PartitionTable read_partition(std::istream& is, const std::string& source) {
  std::string line;
  if (!std::getline(is, line)) fail(source, 1, "missing header");
  const auto header = split_line(line);
  if (header.size() != 2 || header[0] != "id" || header[1] != "cluster") fail(source, 1, "header must be id,cluster");
  std::vector<std::string> ids;
  std::vector<int> labels;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    if (cells.size() != 2) fail(source, lineno, "expected 2 fields");
    int label = 0;
    const auto res = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), label);
    if (res.ec != std::errc() || res.ptr != cells[1].data() + cells[1].size() || label < 1)
      fail(source, lineno, "cluster label must be an integer >= 1");
    ids.push_back(cells[0]);
    labels.push_back(label - 1);
  }
  return PartitionTable{Partition(std::move(labels)), std::move(ids)};
}

void write_partition_file(const std::string& path, const Partition& p, const std::vector<std::string>& ids) {
  auto os = open_out(path);
  write_partition(os, p, ids);
}

PartitionTable read_partition_file(const std::string& path) {
  auto is = open_in(path);
  return read_partition(is, path);
}

void write_count_matrix(std::ostream& os, const CountMatrix& b, const std::vector<std::string>& ids) {
  if (static_cast<Eigen::Index>(ids.size()) != b.rows()) throw InputError("write_count_matrix: id count mismatch");
  os << "id";
  for (const auto& id : ids) os << ',' << id;
  os << '\n';
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    os << ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < b.cols(); ++j) os << ',' << b(i, j);
    os << '\n';
  }
}

CountMatrix read_count_matrix(std::istream& is, const std::string& source) {
  std::string line;
  if (!std::getline(is, line)) fail(source, 1, "missing header");
  const auto header = split_line(line);
  const auto m = static_cast<Eigen::Index>(header.size()) - 1;
  CountMatrix b(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!std::getline(is, line)) fail(source, static_cast<std::size_t>(i) + 2, "missing row");
    const auto cells = split_line(line);
    if (static_cast<Eigen::Index>(cells.size()) != m + 1) fail(source, static_cast<std::size_t>(i) + 2, "wrong field count");
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& c = cells[static_cast<std::size_t>(j) + 1];
      std::int64_t v = 0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc()) fail(source, static_cast<std::size_t>(i) + 2, "not an integer: '" + c + "'");
      b(i, j) = v;
    }
  }
  return b;
}

}  // namespace frecl::io
