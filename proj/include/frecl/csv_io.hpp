#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "frecl/consensus.hpp"
#include "frecl/fda_core.hpp"
#include "frecl/partition.hpp"

namespace frecl::io {

// Curve CSV:      id,t_<v1>,...,t_<vT>   one row per observation
// Partition CSV:  id,cluster             labels start at 1
// Numbers are written in shortest round-trip form.

std::string format_number(double v);
double parse_number(const std::string& text);

struct CurveTable {
  CurveSet curves;
  std::vector<std::string> ids;
};

void write_curves(std::ostream& os, const CurveSet& cs, const std::vector<std::string>& ids);
CurveTable read_curves(std::istream& is, const std::string& source = "<stream>");
void write_curves_file(const std::string& path, const CurveSet& cs, const std::vector<std::string>& ids);
CurveTable read_curves_file(const std::string& path);

struct PartitionTable {
  Partition partition;
  std::vector<std::string> ids;
};

void write_partition(std::ostream& os, const Partition& p, const std::vector<std::string>& ids);
PartitionTable read_partition(std::istream& is, const std::string& source = "<stream>");
void write_partition_file(const std::string& path, const Partition& p, const std::vector<std::string>& ids);
PartitionTable read_partition_file(const std::string& path);

/// id,<id_1>,...,<id_m> header, then one row of counts per observation.
void write_count_matrix(std::ostream& os, const CountMatrix& b, const std::vector<std::string>& ids);
CountMatrix read_count_matrix(std::istream& is, const std::string& source = "<stream>");

std::vector<std::string> split_line(const std::string& line);

}  // namespace frecl::io
