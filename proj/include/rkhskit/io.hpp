#pragma once

#include "rkhskit/kernels.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace rkhs {

// CSV dialect: comma, UTF-8, '.' decimal. Square matrices are header-free;
// data tables carry a header row. Parse errors report the 1-based line.

Matrix read_matrix_csv(const std::string& path);

struct Table {
    std::vector<std::string> headers;
    Matrix data;
};

Table read_table_csv(const std::string& path);

// Written atomically (temp file + rename), floats with 17 significant digits.
void write_matrix_csv(const std::string& path, const Matrix& m);
void write_table_csv(const std::string& path, const std::vector<std::string>& headers,
                     const Matrix& data);

// 17-significant-digit float formatting shared by CSV and JSON output.
std::string format_double(double v);

void write_file_atomic(const std::string& path, const std::string& content);

// Minimal JSON value for result emission: insertion-ordered objects,
// doubles at 17 significant digits, non-finite numbers serialized as null.
class Json {
public:
    Json() : kind_(Kind::null) {}

    static Json object() { return Json(Kind::object); }
    static Json array() { return Json(Kind::array); }
    static Json number(double v) { Json j(Kind::number); j.num_ = v; return j; }
    static Json integer(std::int64_t v) { Json j(Kind::integer); j.int_ = v; return j; }
    static Json boolean(bool v) { Json j(Kind::boolean); j.bool_ = v; return j; }
    static Json string(std::string v) { Json j(Kind::string); j.str_ = std::move(v); return j; }
    static Json array_of(const Vector& v);
    static Json array_of(const Matrix& m);  // array of row arrays

    Json& set(const std::string& key, Json value);
    Json& push(Json value);

    std::string dump(int indent = 2) const;

private:
    enum class Kind { null, object, array, number, integer, boolean, string };
    explicit Json(Kind k) : kind_(k) {}
    void write(std::string& out, int indent, int depth) const;

    Kind kind_;
    double num_ = 0.0;
    std::int64_t int_ = 0;
    bool bool_ = false;
    std::string str_;
    std::vector<std::pair<std::string, Json>> members_;
    std::vector<Json> items_;
};

}  // namespace rkhs
