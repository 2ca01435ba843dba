#pragma once

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "carshare/network.hpp"
#include "carshare/priority.hpp"

namespace carshare {

enum class VarKind : std::uint8_t { customer, outbound, ret, connecting, source };
enum class RowKind : std::uint8_t { flow, precedence, link };
enum class Sense : std::uint8_t { eq, le };

struct Variable {
  std::string name;
  VarKind kind = VarKind::connecting;
  double lb = 0.0;
  double ub = 0.0;
  double obj = 0.0;
  bool integer = false;
  CustomerId customer = 0;  // customer, outbound and return columns
  int arc = -1;             // network arc for connecting and source columns
};

struct Constraint {
  std::string name;
  RowKind kind = RowKind::flow;
  Sense sense = Sense::eq;
  double rhs = 0.0;
  std::vector<std::pair<int, double>> coefs;  // (column, value), columns distinct
};

/// Maximization model over one network: objective = sum of customer columns.
struct Model {
  std::vector<Variable> vars;
  std::vector<Constraint> rows;
  int customer_count = 0;
  std::vector<int> customer_var;  // customer id -> column, -1 if absent

  int var_count() const { return static_cast<int>(vars.size()); }
  int row_count() const { return static_cast<int>(rows.size()); }
  int column(CustomerId c) const { return customer_var[static_cast<std::size_t>(c)]; }
  int row_count(RowKind k) const;
  int var_count(VarKind k) const;
  std::size_t nonzeros() const;
};

struct ModelOptions {
  /// Keep separate outbound and return columns tied by an equality row
  /// instead of one merged customer column. For differential testing.
  bool unmerged = false;
};

/// Flow conservation per vertex other than s and t; arc capacities become
/// column bounds.
Model build_cs1(const Network& net, ModelOptions opt = {});
/// CS1 plus one row x_c - x_c' <= 0 per forest arc c -> c'.
Model build_cs2(const Network& net, const PriorityDag& forest, ModelOptions opt = {});

/// Appends precedence rows to an existing model.
void add_precedence_rows(Model& m, const PriorityDag& arcs);

enum class ModelKind { cs1, cs2 };
ModelKind parse_model_kind(const std::string& s);
const char* to_string(ModelKind k);

/// Network, optional minimization, then CS1 or CS2 with the priority forest.
Model build_model(const Instance& inst, ModelKind kind, bool preprocess = true, ModelOptions opt = {});

enum class ModelFormat { mps, lp };
ModelFormat parse_model_format(const std::string& s);

void write_mps(const Model& m, std::ostream& out);
void write_lp(const Model& m, std::ostream& out);
void export_model(const Model& m, ModelFormat f, const std::filesystem::path& path);

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads the MPS subset written by write_mps.
Model read_mps(std::istream& in);

}  // namespace carshare
