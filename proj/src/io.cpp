#include "rkhskit/io.hpp"

#include "rkhskit/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rkhs {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (const char ch : line) {
        if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else if (ch != '\r') {
            field += ch;
        }
    }
    fields.push_back(field);
    return fields;
}

double parse_double(const std::string& s, const std::string& path, int line_no) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0')) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": not a number: '" << s << "'";
        throw InvalidInput(msg.str());
    }
    return v;
}

std::vector<std::vector<double>> read_rows(const std::string& path, std::ifstream& in,
                                           int first_line) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = first_line - 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_line(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f, path, line_no));
        if (!rows.empty() && row.size() != rows.front().size()) {
            std::ostringstream msg;
            msg << path << ":" << line_no << ": expected " << rows.front().size()
                << " fields, got " << row.size();
            throw InvalidInput(msg.str());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return m;
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open input file: " + path);
    const Matrix m = to_matrix(read_rows(path, in, 1));
    if (m.size() == 0) throw InvalidInput(path + ": empty matrix");
    return m;
}

Table read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open input file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw InvalidInput(path + ": empty file");
    Table t;
    for (auto& h : split_line(header)) t.headers.push_back(h);
    t.data = to_matrix(read_rows(path, in, 2));
    if (t.data.size() == 0) throw InvalidInput(path + ": no data rows");
    if (t.data.cols() != static_cast<Index>(t.headers.size()))
        throw InvalidInput(path + ": header has " + std::to_string(t.headers.size()) +
                           " fields but rows have " + std::to_string(t.data.cols()));
    return t;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput("unwritable output: " + path);
        out << content;
        if (!out.good()) throw InvalidInput("write failed: " + path);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw InvalidInput("cannot move output into place: " + path);
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
    std::string out;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_table_csv(const std::string& path, const std::vector<std::string>& headers,
                     const Matrix& data) {
    std::string out;
    for (std::size_t j = 0; j < headers.size(); ++j) {
        if (j > 0) out += ',';
        out += headers[j];
    }
    out += '\n';
    for (Index i = 0; i < data.rows(); ++i) {
        for (Index j = 0; j < data.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_double(data(i, j));
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

Json Json::array_of(const Vector& v) {
    Json arr = array();
    for (Index i = 0; i < v.size(); ++i) arr.push(number(v(i)));
    return arr;
}

Json Json::array_of(const Matrix& m) {
    Json arr = array();
    for (Index i = 0; i < m.rows(); ++i) arr.push(array_of(Vector(m.row(i).transpose())));
    return arr;
}

Json& Json::set(const std::string& key, Json value) {
    if (kind_ != Kind::object) throw InvalidInput("Json::set on a non-object");
    members_.emplace_back(key, std::move(value));
    return *this;
}

Json& Json::push(Json value) {
    if (kind_ != Kind::array) throw InvalidInput("Json::push on a non-array");
    items_.push_back(std::move(value));
    return *this;
}

void Json::write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string closing(static_cast<std::size_t>(indent * depth), ' ');
    switch (kind_) {
        case Kind::null: out += "null"; break;
        case Kind::boolean: out += bool_ ? "true" : "false"; break;
        case Kind::integer: out += std::to_string(int_); break;
        case Kind::number:
            out += std::isfinite(num_) ? format_double(num_) : "null";
            break;
        case Kind::string: {
            out += '"';
            for (const char ch : str_) {
                switch (ch) {
                    case '"': out += "\\\""; break;
                    case '\\': out += "\\\\"; break;
                    case '\n': out += "\\n"; break;
                    case '\t': out += "\\t"; break;
                    case '\r': out += "\\r"; break;
                    default:
                        if (static_cast<unsigned char>(ch) < 0x20) {
                            char buf[8];
                            std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                            out += buf;
                        } else {
                            out += ch;
                        }
                }
            }
            out += '"';
            break;
        }
        case Kind::object: {
            if (members_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (std::size_t i = 0; i < members_.size(); ++i) {
                out += pad + '"' + members_[i].first + "\": ";
                members_[i].second.write(out, indent, depth + 1);
                if (i + 1 < members_.size()) out += ',';
                out += '\n';
            }
            out += closing + "}";
            break;
        }
        case Kind::array: {
            if (items_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < items_.size(); ++i) {
                out += pad;
                items_[i].write(out, indent, depth + 1);
                if (i + 1 < items_.size()) out += ',';
                out += '\n';
            }
            out += closing + "]";
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

}  // namespace rkhs
