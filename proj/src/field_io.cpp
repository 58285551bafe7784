#include "swlab/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>

namespace swlab {

static_assert(std::endian::native == std::endian::little, "field container assumes a little-endian host");

void write_raw(std::ostream& os, const RawField& f) {
    nlohmann::json h;
    h["dims"] = f.dims;
    h["components"] = f.components;
    h["dtype"] = f.complex ? "c128" : "f64";
    os << h.dump() << '\n';
    os.write(reinterpret_cast<const char*>(f.data.data()), std::streamsize(f.data.size() * sizeof(double)));
}

RawField read_raw(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("field container: missing header");
    auto h = nlohmann::json::parse(line);
    RawField f;
    f.dims = h.at("dims").get<std::vector<int>>();
    f.components = h.at("components").get<int>();
    std::string dt = h.at("dtype").get<std::string>();
    if (dt != "f64" && dt != "c128") throw std::runtime_error("field container: unknown dtype " + dt);
    f.complex = dt == "c128";
    std::size_t count = std::size_t(f.components) * (f.complex ? 2 : 1);
    for (int d : f.dims) count *= std::size_t(d);
    f.data.resize(count);
    is.read(reinterpret_cast<char*>(f.data.data()), std::streamsize(count * sizeof(double)));
    if (std::size_t(is.gcount()) != count * sizeof(double)) throw std::runtime_error("field container: truncated data");
    return f;
}

void write_raw_file(const std::string& path, const RawField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_raw(os, f);
}

RawField read_raw_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_raw(is);
}

RawField matrix_to_raw(const Eigen::MatrixXd& m) {
    RawField r;
    r.dims = {int(m.rows()), int(m.cols())};
    r.data.resize(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.data[i * m.cols() + j] = m(i, j);
    return r;
}

}  // namespace swlab
