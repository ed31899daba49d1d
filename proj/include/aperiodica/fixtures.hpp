#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aperiodica/io.hpp"

#ifndef APERIODICA_DATA_DIR
#define APERIODICA_DATA_DIR "data"
#endif

namespace aperiodica {

/// Directory holding the shipped `.sub` files; APERIODICA_DATA overrides the build-time path.
inline std::filesystem::path fixture_dir() {
    if (const char* env = std::getenv("APERIODICA_DATA"); env && *env) return env;
    return APERIODICA_DATA_DIR;
}

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names{"fibonacci", "n3", "n4", "n4-merged", "n4-dual", "substperm", "substtransp", "golden-triangle-data", "n7"};
    return names;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline SubstitutionFile load_substitution(const std::filesystem::path& path) {
    SubstitutionFile f = parse_substitution_file(read_text(path));
    if (f.name.empty()) f.name = path.stem().string();
    return f;
}

inline SubstitutionFile load_fixture(const std::string& name) {
    const auto& names = fixture_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + name + "'");
    return load_substitution(fixture_dir() / (name + ".sub"));
}

/// The two rearranged variants of merged M_4: permuted rule words, and the transposed matrix.
inline std::vector<GeometricSubstitution> variant_fixtures() {
    return {to_geometric(load_fixture("substperm")), to_geometric(load_fixture("substtransp"))};
}

} // namespace aperiodica
