// JSON state files.
//
//   {"kind": "pure",       "dims": [2,2,2], "amplitudes": [[re,im], ...]}
//   {"kind": "density",    "dims": [2,2,2], "matrix": [[[re,im], ...], ...]}
//   {"kind": "marginals",  "dims": [2,2,2],
//    "marginals": [{"subsystems": [0,1], "matrix": ...}, ...]}
//   {"kind": "classical",  "dims": [2,2,2], "probs": [p000, p001, ...]}
//
// Pure files may set "normalize": true to accept an unnormalized vector.
// Doubles are written in shortest round-trip form, so save/load is lossless.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "qmarg/classical.hpp"
#include "qmarg/maxent.hpp"

namespace qmarg {

enum class StateKind { Pure, Density, Marginals, Classical };

const char* state_kind_name(StateKind k);

using StatePayload =
    std::variant<PureState, DensityMatrix, MarginalSet, classical::JointDistribution>;

struct StateFile {
  StatePayload payload;
  StateKind kind() const { return static_cast<StateKind>(payload.index()); }
};

/// Malformed file. `where()` is a byte offset or a JSON pointer.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

StateFile parse_state_file(std::string_view text);
StateFile load_state_file(const std::filesystem::path& path);

std::string format_state_file(const StateFile& file);
void save_state_file(const std::filesystem::path& path, const StateFile& file);

}  // namespace qmarg
