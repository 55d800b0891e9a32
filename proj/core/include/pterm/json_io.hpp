#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pterm/certificate.hpp"
#include "pterm/pcfg.hpp"

namespace pterm::io {

/// Interchange documents. Loaders throw FormatError whose path() is a JSON
/// pointer to the offending field; dumpers emit two-space indented JSON
/// with a trailing newline.

PCFG pcfg_from_json(std::string_view text);
std::string pcfg_to_json(const PCFG& p);
PCFG load_pcfg(const std::filesystem::path& path);
void dump_pcfg(const PCFG& p, const std::filesystem::path& path);

/// `{location: ["x >= -7", ...]}`; a constraint may also be given as
/// `{"lhs": linexpr, "rel": "<=" | "<" | "=="}` meaning lhs rel 0.
Invariant invariant_from_json(std::string_view text, const PCFG& p);
std::string invariant_to_json(const Invariant& inv, const PCFG& p);
Invariant load_invariant(const std::filesystem::path& path, const PCFG& p);

Certificate certificate_from_json(std::string_view text, const PCFG& p);
std::string certificate_to_json(const Certificate& c, const PCFG& p);
Certificate load_certificate(const std::filesystem::path& path, const PCFG& p);
void dump_certificate(const Certificate& c, const PCFG& p, const std::filesystem::path& path);

/// Reads a pCFG from either an interchange file (.json) or program source.
PCFG load_program(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace pterm::io
