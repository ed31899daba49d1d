#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "aperiodica/geometry2d.hpp"

namespace aperiodica {

/// ParseError with the 1-based position of the offending token.
class ParseFailure : public Error {
public:
    ParseFailure(std::size_t line, std::size_t column, const std::string& what)
        : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_, column_;
};

struct MergeDirective {
    std::string first, second, into;
};

/// Contents of a substitution file.
///
///     # comment
///     name: n4-merged
///     alphabet: X S M L
///     X -> L
///     S -> M L
///     minpoly: 1 0 -3 1          (coefficients, constant first)
///     length S = [-1 1 0]        (power-basis coordinates in ℤ[λ])
///     anchor: right | left
///     merge: X S -> L            (applied after realization)
///     mode: primal | dual        (default for `verify`)
///     volumes: 2.058 1.272       (prototile volumes, one per letter)
///     dimension: 2
struct SubstitutionFile {
    std::string name;
    std::string description;
    SymbolicSubstitution sigma;
    std::optional<IntPolynomial> minpoly;
    std::map<std::string, std::vector<long long>> lengths;
    Anchor anchor = Anchor::Right;
    std::vector<MergeDirective> merges;
    std::optional<std::string> mode;
    std::optional<std::vector<double>> volumes;
    int dimension = 1;

    bool is_geometric() const { return dimension == 1; }
};

namespace detail {

struct Token {
    std::string text;
    std::size_t column; // 1-based, in code points
};

inline std::size_t utf8_columns(const std::string& s, std::size_t bytes) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < bytes && i < s.size(); ++i)
        if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) ++c;
    return c;
}

inline std::vector<Token> tokenize(const std::string& line, std::size_t offset_bytes, const std::string& full) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char ch = line[i];
        if (ch == ' ' || ch == '\t' || ch == ',' || ch == '\r') {
            ++i;
            continue;
        }
        if (ch == '[' || ch == ']' || ch == '=') {
            out.push_back({std::string(1, ch), utf8_columns(full, offset_bytes + i) + 1});
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != ',' && line[j] != '[' && line[j] != ']' && line[j] != '=' &&
               line[j] != '\r')
            ++j;
        out.push_back({line.substr(i, j - i), utf8_columns(full, offset_bytes + i) + 1});
        i = j;
    }
    return out;
}

inline long long parse_int(const Token& t, std::size_t line) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(t.text, &used);
        if (used == t.text.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseFailure(line, t.column, "expected an integer, found '" + t.text + "'");
}

inline double parse_real(const Token& t, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(t.text, &used);
        if (used == t.text.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseFailure(line, t.column, "expected a number, found '" + t.text + "'");
}

} // namespace detail

inline SubstitutionFile parse_substitution_file(const std::string& text) {
    SubstitutionFile f;
    std::vector<std::string> alphabet;
    bool have_alphabet = false;
    struct PendingRule {
        std::string lhs;
        std::vector<detail::Token> rhs;
        std::size_t line, column;
    };
    std::vector<PendingRule> pending;
    std::vector<std::pair<detail::Token, std::size_t>> length_keys;
    std::optional<std::pair<std::size_t, std::size_t>> volumes_at;

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const auto colon = line.find(':');
        const auto arrow = line.find("->");
        if (colon != std::string::npos && (arrow == std::string::npos || colon < arrow)) {
            auto head = detail::tokenize(line.substr(0, colon), 0, raw);
            const auto args = detail::tokenize(line.substr(colon + 1), colon + 1, raw);
            if (head.size() != 1) throw ParseFailure(lineno, 1, "malformed directive");
            const std::string& key = head[0].text;
            if (key == "name" || key == "description") {
                std::string value = line.substr(colon + 1);
                const auto b = value.find_first_not_of(" \t");
                const auto e = value.find_last_not_of(" \t\r");
                value = b == std::string::npos ? "" : value.substr(b, e - b + 1);
                (key == "name" ? f.name : f.description) = value;
            } else if (key == "alphabet") {
                if (args.empty()) throw ParseFailure(lineno, colon + 2, "empty alphabet");
                for (const auto& t : args) {
                    if (std::find(alphabet.begin(), alphabet.end(), t.text) != alphabet.end())
                        throw ParseFailure(lineno, t.column, "duplicate letter '" + t.text + "'");
                    alphabet.push_back(t.text);
                }
                have_alphabet = true;
            } else if (key == "minpoly") {
                std::vector<long long> c;
                for (const auto& t : args) c.push_back(detail::parse_int(t, lineno));
                if (c.size() < 2) throw ParseFailure(lineno, colon + 2, "minimal polynomial needs degree >= 1");
                if (c.back() != 1) throw ParseFailure(lineno, args.back().column, "minimal polynomial must be monic");
                f.minpoly = IntPolynomial(std::vector<BigInt>(c.begin(), c.end()));
            } else if (key == "lengths") {
                throw ParseFailure(lineno, 1, "use one 'length X = [...]' line per letter");
            } else if (key == "anchor") {
                if (args.size() != 1 || (args[0].text != "left" && args[0].text != "right"))
                    throw ParseFailure(lineno, colon + 2, "anchor must be 'left' or 'right'");
                f.anchor = args[0].text == "left" ? Anchor::Left : Anchor::Right;
            } else if (key == "merge") {
                if (args.size() != 4 || args[2].text != "->") throw ParseFailure(lineno, colon + 2, "expected 'merge: X Y -> Z'");
                f.merges.push_back({args[0].text, args[1].text, args[3].text});
            } else if (key == "mode") {
                if (args.size() != 1 || (args[0].text != "primal" && args[0].text != "dual"))
                    throw ParseFailure(lineno, colon + 2, "mode must be 'primal' or 'dual'");
                f.mode = args[0].text;
            } else if (key == "volumes") {
                std::vector<double> v;
                for (const auto& t : args) v.push_back(detail::parse_real(t, lineno));
                f.volumes = std::move(v);
                volumes_at = {lineno, colon + 2};
            } else if (key == "dimension") {
                if (args.size() != 1) throw ParseFailure(lineno, colon + 2, "expected one integer");
                f.dimension = static_cast<int>(detail::parse_int(args[0], lineno));
                if (f.dimension < 1) throw ParseFailure(lineno, args[0].column, "dimension must be positive");
            } else {
                throw ParseFailure(lineno, head[0].column, "unknown directive '" + key + "'");
            }
            continue;
        }
        const auto tokens = detail::tokenize(line, 0, raw);
        if (tokens.empty()) continue;
        if (tokens[0].text == "length") {
            // length X = [c0 c1 ...]
            if (tokens.size() < 5 || tokens[2].text != "=" || tokens[3].text != "[" || tokens.back().text != "]")
                throw ParseFailure(lineno, tokens[0].column, "expected 'length X = [c0 c1 ...]'");
            std::vector<long long> c;
            for (std::size_t i = 4; i + 1 < tokens.size(); ++i) c.push_back(detail::parse_int(tokens[i], lineno));
            if (f.lengths.count(tokens[1].text)) throw ParseFailure(lineno, tokens[1].column, "length given twice");
            f.lengths[tokens[1].text] = std::move(c);
            length_keys.emplace_back(tokens[1], lineno);
            continue;
        }
        if (tokens.size() < 2 || tokens[1].text != "->")
            throw ParseFailure(lineno, tokens.size() < 2 ? tokens[0].column : tokens[1].column, "expected 'X -> word'");
        if (tokens.size() == 2) throw ParseFailure(lineno, tokens[1].column + 2, "empty rule image");
        pending.push_back({tokens[0].text, {tokens.begin() + 2, tokens.end()}, lineno, tokens[0].column});
    }

    if (pending.empty()) throw Error(ErrorCode::MissingRule, "no substitution rules");
    if (!have_alphabet)
        for (const auto& r : pending)
            if (std::find(alphabet.begin(), alphabet.end(), r.lhs) == alphabet.end()) alphabet.push_back(r.lhs);
    std::vector<std::optional<Word>> rules(alphabet.size());
    auto index = [&](const std::string& name, std::size_t line, std::size_t col) {
        const auto it = std::find(alphabet.begin(), alphabet.end(), name);
        if (it == alphabet.end())
            throw Error(ErrorCode::UnknownLetter, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": letter '" + name + "' is not in the alphabet");
        return static_cast<std::size_t>(it - alphabet.begin());
    };
    for (const auto& r : pending) {
        const std::size_t i = index(r.lhs, r.line, r.column);
        if (rules[i]) throw ParseFailure(r.line, r.column, "second rule for '" + r.lhs + "'");
        Word w;
        for (const auto& t : r.rhs) w.push_back(index(t.text, r.line, t.column));
        rules[i] = std::move(w);
    }
    std::vector<Word> words;
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
        if (!rules[i]) throw Error(ErrorCode::MissingRule, "no rule for letter '" + alphabet[i] + "'");
        words.push_back(*rules[i]);
    }
    for (const auto& [tok, line] : length_keys) index(tok.text, line, tok.column);
    if (!f.lengths.empty() && f.lengths.size() != alphabet.size())
        throw ParseFailure(length_keys.back().second, 1, "lengths must be given for every letter or none");
    if (f.volumes && f.volumes->size() != alphabet.size())
        throw ParseFailure(volumes_at->first, volumes_at->second, "one volume per letter required");
    f.sigma = SymbolicSubstitution(std::move(alphabet), std::move(words));
    return f;
}

/// Realizes the file as an interval substitution (field, lengths, merges).
inline GeometricSubstitution to_geometric(const SubstitutionFile& f, double precision = 1e-15) {
    if (!f.is_geometric()) throw Error(ErrorCode::InvalidArgument, "substitution is not one-dimensional");
    const IntMatrix a = matrix_of(f.sigma);
    if (!is_primitive(a)) throw Error(ErrorCode::NotPrimitive, "substitution matrix is not primitive");
    const IntPolynomial p = pf_minimal_polynomial(poly::characteristic_polynomial(a));
    if (f.minpoly && *f.minpoly != p)
        throw Error(ErrorCode::InvalidArgument, "declared minimal polynomial " + f.minpoly->to_string() + " differs from " + p.to_string());
    const FieldPtr F = NumberField::create(p, precision);
    std::optional<std::vector<FieldElement>> lengths;
    if (!f.lengths.empty()) {
        std::vector<FieldElement> v;
        for (const auto& name : f.sigma.alphabet()) {
            const auto& c = f.lengths.at(name);
            if (c.size() != F->degree())
                throw Error(ErrorCode::DimensionMismatch, "length of " + name + " needs " + std::to_string(F->degree()) + " coordinates");
            v.emplace_back(F, std::vector<BigInt>(c.begin(), c.end()));
        }
        lengths = std::move(v);
    }
    GeometricSubstitution g = realize(f.sigma, lengths, f.anchor, F);
    for (const auto& m : f.merges) {
        for (const auto* name : {&m.first, &m.second, &m.into})
            if (std::find(g.sigma.alphabet().begin(), g.sigma.alphabet().end(), *name) == g.sigma.alphabet().end())
                throw Error(ErrorCode::UnknownLetter, "merge uses unknown letter '" + *name + "'");
        g = merge_letters(g, m.first, m.second, m.into);
    }
    return g;
}

// ---- figure output ----

struct SvgOptions {
    double scale = 100;     // px per unit
    double width = 0;       // overrides scale when positive
    double point_px = 0.7;  // marker radius
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s = buf;
    if (s == "-0.0000") s = "0.0000";
    return s;
}

inline const char* type_colour(std::size_t t) {
    static const char* colours[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
    return colours[t % 8];
}

struct Frame {
    double x0, y0, x1, y1, scale;
};

inline Frame frame(double x0, double y0, double x1, double y1, const SvgOptions& opt) {
    const double pad = 0.02 * std::max({x1 - x0, y1 - y0, 1e-9});
    Frame f{x0 - pad, y0 - pad, x1 + pad, y1 + pad, opt.scale};
    if (opt.width > 0) f.scale = opt.width / (f.x1 - f.x0);
    return f;
}

inline void header(std::ostream& os, const Frame& f) {
    const double w = (f.x1 - f.x0) * f.scale, h = (f.y1 - f.y0) * f.scale;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\"" << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << ' ' << fmt(h)
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

} // namespace detail

/// Scatter plot of a 1D or 2D cloud, one colour per type (type 0 black).
/// 1D clouds are drawn as one horizontal strip per type.
inline void write_cloud_svg(std::ostream& os, const PointCloud& cloud, const SvgOptions& opt = {}) {
    if (cloud.dim != 1 && cloud.dim != 2) throw Error(ErrorCode::DimensionMismatch, "SVG output needs a 1D or 2D cloud");
    std::size_t types = 0;
    for (std::size_t t : cloud.types) types = std::max(types, t + 1);
    const auto [lo, hi] = cloud.empty() ? std::pair{std::vector<double>(cloud.dim, 0.0), std::vector<double>(cloud.dim, 1.0)} : cloud.bounds();
    const double span = hi[0] - lo[0];
    const double row = 0.05 * std::max(span, 1e-9);
    const double y0 = cloud.dim == 2 ? lo[1] : 0, y1 = cloud.dim == 2 ? hi[1] : row * static_cast<double>(std::max<std::size_t>(types, 1));
    const auto f = detail::frame(lo[0], y0, hi[0], y1, opt);
    detail::header(os, f);
    for (std::size_t t = 0; t < std::max<std::size_t>(types, 1); ++t) {
        os << "<g fill=\"" << detail::type_colour(t) << "\">\n";
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            if (cloud.types[i] != t) continue;
            const double* p = cloud.point(i);
            const double y = cloud.dim == 2 ? p[1] : row * (static_cast<double>(t) + 0.5);
            os << "<circle cx=\"" << detail::fmt((p[0] - f.x0) * f.scale) << "\" cy=\"" << detail::fmt((f.y1 - y) * f.scale) << "\" r=\""
               << detail::fmt(opt.point_px) << "\"/>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
}

/// `type,x0,x1,...` rows.
inline void write_cloud_csv(std::ostream& os, const PointCloud& cloud, const std::vector<std::string>& names) {
    os << "type";
    for (std::size_t d = 0; d < cloud.dim; ++d) os << ",x" << d;
    os << '\n';
    char buf[32];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        os << names.at(cloud.types[i]);
        for (std::size_t d = 0; d < cloud.dim; ++d) {
            std::snprintf(buf, sizeof buf, "%.17g", cloud.point(i)[d]);
            os << ',' << buf;
        }
        os << '\n';
    }
}

/// Polygon patch; tiles whose type is named S are black, the others alternate greys.
inline void write_patch_svg(std::ostream& os, const TilePatch2D& patch, const std::vector<Prototile>& prototiles, const InternalSpace& space,
                            const SvgOptions& opt = {}) {
    std::vector<Polygon> polys;
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (const auto& t : patch.tiles) {
        polys.push_back(prototiles.at(t.type).outline.embed(space, &t.translation));
        for (const auto& v : polys.back().vertices) {
            x0 = std::min(x0, v.x);
            y0 = std::min(y0, v.y);
            x1 = std::max(x1, v.x);
            y1 = std::max(y1, v.y);
        }
    }
    if (polys.empty()) x0 = y0 = 0, x1 = y1 = 1;
    const auto f = detail::frame(x0, y0, x1, y1, opt);
    detail::header(os, f);
    static const char* greys[] = {"#bdbdbd", "#f0f0f0"};
    std::size_t shade = 0;
    std::map<std::size_t, const char*> fill;
    for (std::size_t t = 0; t < prototiles.size(); ++t) fill[t] = prototiles[t].name == "S" ? "#000000" : greys[shade++ % 2];
    for (std::size_t i = 0; i < polys.size(); ++i) {
        os << "<polygon fill=\"" << fill[patch.tiles[i].type] << "\" stroke=\"#404040\" stroke-width=\"0.5\" points=\"";
        for (std::size_t k = 0; k < polys[i].vertices.size(); ++k) {
            const auto& v = polys[i].vertices[k];
            os << (k ? " " : "") << detail::fmt((v.x - f.x0) * f.scale) << ',' << detail::fmt((f.y1 - v.y) * f.scale);
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
}

/// `type,tx,ty` rows with the star image of each translation.
inline void write_patch_csv(std::ostream& os, const TilePatch2D& patch, const std::vector<Prototile>& prototiles, const InternalSpace& space) {
    os << "type,tx,ty\n";
    char buf[64];
    for (const auto& t : patch.tiles) {
        const auto s = space.star(t.translation);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", s[0], s[1]);
        os << prototiles.at(t.type).name << ',' << buf << '\n';
    }
}

} // namespace aperiodica
