#pragma once

#include <optional>
#include <string>

#include "sheafctx/empirical.hpp"
#include "sheafctx/spacetime.hpp"

namespace sheafctx {

/// Parsed model document: a scenario plus one empirical model in the
/// declared carrier. Rational weights travel as reduced "p/q" strings,
/// double weights as JSON numbers, boolean support as `true` entries.
struct ModelDocument {
  std::string name;
  std::string carrier;
  std::optional<BigInt> denominator_bound;
  std::optional<EmpiricalModel<RationalSemiring>> rational_model;
  std::optional<EmpiricalModel<DoubleSemiring>> double_model;
  std::optional<EmpiricalModel<BooleanSemiring>> boolean_model;

  const MeasurementScenario& scenario() const;
};

ModelDocument parse_model_document(const std::string& json_text);
std::string serialize_model_document(const ModelDocument& doc);

ModelDocument model_document_from(std::string name,
                                  EmpiricalModel<RationalSemiring> model);
ModelDocument model_document_from(std::string name,
                                  EmpiricalModel<DoubleSemiring> model);

/// Parsed lattice-net document: sites, global state, and the sheaf regions
/// (double cones with their spin settings).
struct NetDocument {
  std::string name;
  LatticeNet net;
  std::vector<SheafRegion> regions;
};

NetDocument parse_net_document(const std::string& json_text);
std::string serialize_net_document(const NetDocument& doc);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace sheafctx
