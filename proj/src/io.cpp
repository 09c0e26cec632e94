#include "emdut/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace emdut {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

PointSetQ parse_point_set(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    Index dim = 0;
    std::vector<PointQ> pts;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto fields = split_ws(line);
        if (fields.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (dim == 0) {
            if (fields.size() != 1) throw ParseError(line_no, "expected a single dimension");
            Rational d;
            try {
                d = Rational::parse(fields[0]);
            } catch (const std::invalid_argument&) {
                throw ParseError(line_no, "dimension is not a number");
            }
            if (!d.is_integer() || d.sign() <= 0 || d > Rational(1 << 20))
                throw ParseError(line_no, "dimension must be a positive integer");
            dim = static_cast<Index>(d.numerator().get_si());
        } else {
            if (static_cast<Index>(fields.size()) != dim)
                throw ParseError(line_no, "expected " + std::to_string(dim) + " coordinates, found " +
                                              std::to_string(fields.size()));
            PointQ p(dim);
            for (Index i = 0; i < dim; ++i) {
                try {
                    p(i) = Rational::parse(fields[i]);
                } catch (const std::exception& e) {
                    throw ParseError(line_no, e.what());
                }
            }
            pts.push_back(std::move(p));
        }
        if (end == text.size()) break;
    }
    if (dim == 0) throw ParseError(line_no == 0 ? 1 : line_no, "missing dimension line");
    return PointSetQ::from_points(dim, pts);
}

std::string serialize_point_set(const PointSetQ& points) {
    std::string out = std::to_string(points.dim()) + "\n";
    for (Index j = 0; j < points.size(); ++j) {
        for (Index i = 0; i < points.dim(); ++i) {
            if (i) out += ' ';
            out += points(i, j).str();
        }
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

PointSetQ read_point_set(const std::filesystem::path& path) {
    std::string text = read_text_file(path);
    try {
        return parse_point_set(text);
    } catch (const ParseError& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

void write_point_set(const std::filesystem::path& path, const PointSetQ& points) {
    write_text_file(path, serialize_point_set(points));
}

}  // namespace emdut
