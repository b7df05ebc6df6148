#include "choquard/field_io.hpp"

#include "choquard/error.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

namespace choquard {

namespace {

std::string real_text(double x)
{
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

double parse_real(const std::string& key, const std::string& v)
{
    double x = 0.0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || ptr != end)
        throw ParameterError("field header: bad value for " + key);
    return x;
}

std::uint64_t to_little(std::uint64_t x)
{
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i)
            r |= ((x >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return r;
    }
    return x;
}

} // namespace

void write_field(std::ostream& os, const Field& u, const ProblemSpec& spec)
{
    if (!(u.grid.dim == spec.dim))
        throw GridMismatch("field and problem dimensions differ");
    os << kFieldMagic;
    os << "version=" << kFieldVersion << '\n';
    os << "N=" << u.grid.dim << '\n';
    os << "M=" << u.grid.points << '\n';
    os << "L=" << real_text(u.grid.length) << '\n';
    os << "alpha=" << real_text(spec.alpha) << '\n';
    const auto& terms = spec.nonlinearity.terms();
    if (spec.nonlinearity.homogeneous() && terms.front().coefficient == 1.0) {
        os << "p=" << real_text(terms.front().exponent) << '\n';
    } else {
        os << "terms=";
        for (std::size_t i = 0; i < terms.size(); ++i)
            os << (i ? "," : "") << real_text(terms[i].coefficient) << ':' << real_text(terms[i].exponent);
        os << '\n';
    }
    os << "dft=forward unnormalized, inverse scaled by 1/M^N, frequency k/L, k in [-M/2, M/2)\n";
    os << "layout=row-major, last axis fastest, x_j = -L/2 + j*L/M\n";
    os << "count=" << u.size() << '\n';
    os << '\n';
    for (double x : u.values) {
        const auto bits = to_little(std::bit_cast<std::uint64_t>(x));
        char buf[8];
        std::memcpy(buf, &bits, 8);
        os.write(buf, 8);
    }
    if (!os)
        throw std::runtime_error("failed writing field");
}

void write_field(const std::filesystem::path& path, const Field& u, const ProblemSpec& spec)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_field(os, u, spec);
}

StoredField read_field(std::istream& is)
{
    std::string magic(std::strlen(kFieldMagic), '\0');
    is.read(magic.data(), static_cast<std::streamsize>(magic.size()));
    if (!is || magic != kFieldMagic)
        throw ParameterError("not a field file (bad magic)");

    std::map<std::string, std::string> header;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty())
            break;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("field header: malformed line '" + line + "'");
        header[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const std::string& k) -> const std::string& {
        auto it = header.find(k);
        if (it == header.end())
            throw ParameterError("field header: missing " + k);
        return it->second;
    };
    if (need("version") != std::to_string(kFieldVersion))
        throw ParameterError("field header: unsupported version " + header["version"]);

    const int dim = static_cast<int>(parse_real("N", need("N")));
    const int m = static_cast<int>(parse_real("M", need("M")));
    const auto grid = make_grid(dim, m, parse_real("L", need("L")));
    const double alpha = parse_real("alpha", need("alpha"));

    std::vector<PowerTerm> terms;
    if (header.count("p")) {
        terms.push_back({1.0, parse_real("p", header["p"])});
    } else {
        std::istringstream ts(need("terms"));
        std::string item;
        while (std::getline(ts, item, ',')) {
            const auto c = item.find(':');
            if (c == std::string::npos)
                throw ParameterError("field header: bad terms entry");
            terms.push_back({parse_real("terms", item.substr(0, c)), parse_real("terms", item.substr(c + 1))});
        }
    }
    StoredField out{Field(grid), make_problem(dim, alpha, Nonlinearity(terms))};

    if (parse_real("count", need("count")) != static_cast<double>(grid.size()))
        throw ParameterError("field header: count does not match grid");
    for (auto& x : out.field.values) {
        char buf[8];
        is.read(buf, 8);
        if (!is)
            throw ParameterError("field file truncated");
        std::uint64_t bits = 0;
        std::memcpy(&bits, buf, 8);
        x = std::bit_cast<double>(to_little(bits));
    }
    if (!out.field.is_finite())
        throw ParameterError("field file contains non-finite samples");
    return out;
}

StoredField read_field(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ParameterError("cannot open field file " + path.string());
    return read_field(is);
}

} // namespace choquard
