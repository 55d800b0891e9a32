#include "support/fixtures.hpp"

#include <algorithm>

#include "pterm/json_io.hpp"

namespace pterm::testing {

std::filesystem::path fixture_path(const std::string& name) { return std::filesystem::path(PTERM_FIXTURES) / name; }

Subject load_subject(const std::string& stem) {
  Subject s{io::load_program(fixture_path(stem + ".prob")), {}};
  const auto inv = fixture_path(stem + ".inv.json");
  s.invariant = std::filesystem::exists(inv) ? io::load_invariant(inv, s.program) : Invariant::trivial(s.program);
  return s;
}

std::vector<std::string> fixture_programs() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(PTERM_FIXTURES))
    if (e.path().extension() == ".prob") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pterm::testing
