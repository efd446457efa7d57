#pragma once

#include <filesystem>
#include <string_view>

#include "misest/chain.hpp"

namespace misest {

/// On-disk chain formats.
///
/// Csv: a header row `c1,...,cp`, then one row of p comma-separated numbers per sample.
/// Binary (`bin`): two little-endian uint64 (n, p), then n*p little-endian IEEE-754
/// doubles in row-major order. Binary round trips are bit-exact.
enum class ChainFormat { Csv, Binary };

ChainFormat parse_chain_format(std::string_view name);
std::string_view to_string(ChainFormat format);

/// Guesses the format from the file extension (".csv" vs anything else).
ChainFormat format_from_extension(const std::filesystem::path& path);

Chain load_chain(const std::filesystem::path& path, ChainFormat format);
void save_chain(const Chain& chain, const std::filesystem::path& path, ChainFormat format);

}  // namespace misest
