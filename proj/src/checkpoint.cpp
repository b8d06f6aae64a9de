// SPDX-License-Identifier: Apache-2.0
#include "vasotherm/checkpoint.hpp"

#include "vasotherm/common.hpp"
#include "vasotherm/output.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace vasotherm {

namespace {

constexpr std::uint64_t kMagic = 0x5654484D43503031ull; // "VTHMCP01"
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a(const std::string& data)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

template <class T>
void put(std::string& out, const T& v)
{
    static_assert(std::is_trivially_copyable_v<T>);
    const char* p = reinterpret_cast<const char*>(&v);
    out.append(p, sizeof(T));
}

void put_vec(std::string& out, const std::vector<double>& v)
{
    put(out, std::uint64_t(v.size()));
    out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
}

void put_vecx(std::string& out, const Eigen::VectorXd& v)
{
    put(out, std::uint64_t(v.size()));
    out.append(reinterpret_cast<const char*>(v.data()), std::size_t(v.size()) * sizeof(double));
}

struct Reader {
    const std::string& data;
    std::size_t pos = 0;

    template <class T>
    T get()
    {
        static_assert(std::is_trivially_copyable_v<T>);
        require(pos + sizeof(T) <= data.size(), "checkpoint: truncated stream");
        T v;
        std::memcpy(&v, data.data() + pos, sizeof(T));
        pos += sizeof(T);
        return v;
    }

    std::vector<double> get_vec()
    {
        const auto n = get<std::uint64_t>();
        require(pos + n * sizeof(double) <= data.size(), "checkpoint: truncated stream");
        std::vector<double> v(n);
        std::memcpy(v.data(), data.data() + pos, n * sizeof(double));
        pos += n * sizeof(double);
        return v;
    }

    Eigen::VectorXd get_vecx()
    {
        const auto n = get<std::uint64_t>();
        require(pos + n * sizeof(double) <= data.size(), "checkpoint: truncated stream");
        const Eigen::Index len = Eigen::Index(n);
        Eigen::VectorXd v(len);
        std::memcpy(v.data(), data.data() + pos, n * sizeof(double));
        pos += n * sizeof(double);
        return v;
    }
};

} // namespace

std::string serialize_checkpoint(const Checkpoint& c)
{
    std::string payload;
    put(payload, c.t);
    put(payload, std::int64_t(c.step_index));
    put_vec(payload, c.c);
    put_vec(payload, c.c_x);
    put(payload, c.history_plateau);
    put(payload, c.history_window);
    put_vec(payload, c.history_times);
    put_vec(payload, c.history_values);
    put_vecx(payload, c.theta);
    put_vecx(payload, c.w);
    put_vecx(payload, c.q);

    std::string out;
    put(out, kMagic);
    put(out, kVersion);
    put(out, std::uint64_t(payload.size()));
    put(out, fnv1a(payload));
    out += payload;
    return out;
}

Checkpoint deserialize_checkpoint(const std::string& bytes)
{
    Reader r{bytes};
    require(r.get<std::uint64_t>() == kMagic, "checkpoint: bad magic");
    const auto version = r.get<std::uint32_t>();
    require(version == kVersion,
            "checkpoint: unsupported version " + std::to_string(version));
    const auto size = r.get<std::uint64_t>();
    const auto checksum = r.get<std::uint64_t>();
    require(r.pos + size == bytes.size(), "checkpoint: size mismatch");
    const std::string payload = bytes.substr(r.pos);
    require(fnv1a(payload) == checksum, "checkpoint: checksum mismatch (corrupt file)");

    Checkpoint c;
    c.t = r.get<double>();
    c.step_index = int(r.get<std::int64_t>());
    c.c = r.get_vec();
    c.c_x = r.get_vec();
    c.history_plateau = r.get<double>();
    c.history_window = r.get<double>();
    c.history_times = r.get_vec();
    c.history_values = r.get_vec();
    c.theta = r.get_vecx();
    c.w = r.get_vecx();
    c.q = r.get_vecx();
    return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& c)
{
    atomic_write(path, serialize_checkpoint(c));
}

Checkpoint load_checkpoint(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "checkpoint: cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return deserialize_checkpoint(os.str());
}

} // namespace vasotherm
