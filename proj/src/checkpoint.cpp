#include "pem/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "pem/errors.hpp"

namespace pem {

namespace {

constexpr std::array<char, 4> magic{'P', 'E', 'M', '1'};

template <typename U>
void put_le(std::ostream& out, U value) {
    std::array<char, sizeof(U)> bytes;
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    out.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& in) {
    std::array<unsigned char, sizeof(U)> bytes;
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw DataError("checkpoint: unexpected end of file");
    }
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
    return value;
}

void put_double(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
double get_double(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

} // namespace

void write_checkpoint(std::ostream& out, const RealField& field, double time) {
    const auto& g = field.grid();
    out.write(magic.data(), magic.size());
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.components()));
    put_double(out, time);
    for (double v : field.data()) put_double(out, v);
    if (!out) throw Error("checkpoint: write failed");
}

void write_checkpoint(const std::filesystem::path& path, const RealField& field, double time) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("checkpoint: cannot open " + path.string() + " for writing");
    write_checkpoint(out, field, time);
}

Checkpoint read_checkpoint(std::istream& in) {
    std::array<char, 4> head{};
    if (!in.read(head.data(), head.size()) || head != magic) throw DataError("checkpoint: bad magic");
    const auto dim = get_le<std::uint32_t>(in);
    const auto n = get_le<std::uint32_t>(in);
    const auto components = get_le<std::uint32_t>(in);
    const double time = get_double(in);
    if (components == 0 || components > 64) throw DataError("checkpoint: implausible component count");
    GridSpec grid = [&] {
        try {
            return GridSpec(static_cast<int>(dim), static_cast<int>(n));
        } catch (const ConfigError& e) {
            throw DataError(std::string("checkpoint: invalid grid header: ") + e.what());
        }
    }();
    std::vector<double> data(static_cast<std::size_t>(components) * grid.points());
    for (double& v : data) v = get_double(in);
    return Checkpoint{time, RealField(grid, static_cast<int>(components), std::move(data))};
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("checkpoint: cannot open " + path.string());
    return read_checkpoint(in);
}

} // namespace pem
