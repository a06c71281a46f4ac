#include "rigaa/scenario.hpp"

#include <json.hpp>

#include <string>

#include "rigaa/errors.hpp"

namespace rigaa {

Chromosome random_chromosome(const ScenarioSchema& schema, Rng& rng) {
  Eigen::Index count = schema.min_elements;
  if (!schema.fixed_length && schema.max_elements > schema.min_elements) {
    count = schema.min_elements +
            rng.uniform_int(0, static_cast<int>(schema.max_elements -
                                                schema.min_elements));
  }
  Chromosome out(count, schema.attribute_count());
  for (Eigen::Index e = 0; e < count; ++e) {
    for (Eigen::Index a = 0; a < schema.attribute_count(); ++a) {
      const auto& spec = schema.attributes[static_cast<std::size_t>(a)];
      out(e, a) = rng.uniform_int(spec.lo, spec.hi);
    }
  }
  return out;
}

Chromosome random_valid_scenario(const Domain& domain, Rng& rng,
                                 int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Chromosome candidate = random_chromosome(domain.schema(), rng);
    if (domain.validate(candidate).valid) return candidate;
  }
  throw GenerationExhausted("no valid scenario after " +
                            std::to_string(max_attempts) + " attempts for " +
                            domain.schema().id);
}

bool matches_schema(const Chromosome& chromosome,
                    const ScenarioSchema& schema) {
  if (chromosome.cols() != schema.attribute_count()) return false;
  if (chromosome.rows() < schema.min_elements ||
      chromosome.rows() > schema.max_elements)
    return false;
  for (Eigen::Index e = 0; e < chromosome.rows(); ++e)
    for (Eigen::Index a = 0; a < chromosome.cols(); ++a)
      if (!schema.attributes[static_cast<std::size_t>(a)].contains(
              chromosome(e, a)))
        return false;
  return true;
}

std::string serialize_scenario(const Chromosome& chromosome,
                               const ScenarioSchema& schema, int indent) {
  if (!matches_schema(chromosome, schema))
    throw SchemaMismatch("chromosome does not match schema " + schema.id);
  nlohmann::json record;
  record["schema_id"] = schema.id;
  auto& elements = record["elements"];
  elements = nlohmann::json::array();
  for (Eigen::Index e = 0; e < chromosome.rows(); ++e) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index a = 0; a < chromosome.cols(); ++a)
      row.push_back(chromosome(e, a));
    elements.push_back(std::move(row));
  }
  return record.dump(indent);
}

Chromosome deserialize_scenario(const std::string& record,
                                const ScenarioSchema& schema) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(record);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("unparseable scenario record: ") +
                         e.what());
  }
  if (!parsed.contains("schema_id") || !parsed["schema_id"].is_string())
    throw SchemaMismatch("scenario record missing schema_id");
  if (parsed["schema_id"].get<std::string>() != schema.id)
    throw SchemaMismatch("schema_id " +
                         parsed["schema_id"].get<std::string>() +
                         " does not match expected " + schema.id);
  if (!parsed.contains("elements") || !parsed["elements"].is_array())
    throw SchemaMismatch("scenario record missing elements");

  const auto& elements = parsed["elements"];
  const auto rows = static_cast<Eigen::Index>(elements.size());
  if (rows < schema.min_elements || rows > schema.max_elements)
    throw SchemaMismatch("element count " + std::to_string(rows) +
                         " outside [" + std::to_string(schema.min_elements) +
                         ", " + std::to_string(schema.max_elements) + "]");

  Chromosome out(rows, schema.attribute_count());
  for (Eigen::Index e = 0; e < rows; ++e) {
    const auto& row = elements[static_cast<std::size_t>(e)];
    if (!row.is_array() ||
        static_cast<Eigen::Index>(row.size()) != schema.attribute_count())
      throw SchemaMismatch("element " + std::to_string(e) +
                           " has wrong attribute count");
    for (Eigen::Index a = 0; a < schema.attribute_count(); ++a) {
      const auto& cell = row[static_cast<std::size_t>(a)];
      if (!cell.is_number_integer())
        throw SchemaMismatch("non-integer attribute value");
      const int value = cell.get<int>();
      const auto& spec = schema.attributes[static_cast<std::size_t>(a)];
      if (!spec.contains(value))
        throw SchemaMismatch("attribute " + spec.name + " value " +
                             std::to_string(value) + " outside [" +
                             std::to_string(spec.lo) + ", " +
                             std::to_string(spec.hi) + "]");
      out(e, a) = value;
    }
  }
  return out;
}

}  // namespace rigaa
