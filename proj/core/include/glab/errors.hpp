#pragma once
#include <stdexcept>
#include <string>

namespace glab {

// Error hierarchy mirrored by the CLI exit codes. Anything derived from
// GlabError carries a stable machine-readable kind string.
struct GlabError : std::runtime_error {
  GlabError(const std::string& kind, int exit_code, const std::string& msg)
      : std::runtime_error(msg), kind(kind), exit_code(exit_code) {}
  std::string kind;
  int exit_code;
};

struct SchemaError : GlabError {
  explicit SchemaError(const std::string& msg) : GlabError("schema", 2, msg) {}
};

struct MixingError : GlabError {
  explicit MixingError(const std::string& msg) : GlabError("mixing", 3, msg) {}
};

struct BudgetError : GlabError {
  explicit BudgetError(const std::string& msg) : GlabError("budget", 4, msg) {}
};

struct EstimationError : GlabError {
  explicit EstimationError(const std::string& msg) : GlabError("estimation", 5, msg) {}
};

}  // namespace glab
