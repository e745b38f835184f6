// SPDX-License-Identifier: Apache-2.0
#include "skt/paramvec/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "skt/common/errors.hpp"

namespace skt {
namespace {

constexpr char kMagic[8] = {'N', 'P', 'S', 'E', 'T', 'v', '1', '\0'};

// The payload is little-endian on disk regardless of host order.
static_assert(std::endian::native == std::endian::little,
              "big-endian hosts need byte swaps in load/save");

void write_u32_le(std::ostream& os, uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff),
                 static_cast<char>((v >> 24) & 0xff)};
    os.write(b, 4);
}

uint32_t read_u32_le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw ParseError("truncated header length");
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) |
           (static_cast<uint32_t>(b[3]) << 24);
}

}  // namespace

void save_nps1(const std::filesystem::path& path, const NamedParamSet& params) {
    nlohmann::json header = nlohmann::json::array();
    size_t offset = 0;
    for (const auto& e : params.entries()) {
        header.push_back({{"name", e.name},
                          {"length", e.values.size()},
                          {"byte_offset", offset}});
        offset += e.values.size() * sizeof(float);
    }
    const std::string htext = header.dump();

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw ParseError("cannot open for writing: " + path.string());
    os.write(kMagic, sizeof(kMagic));
    write_u32_le(os, static_cast<uint32_t>(htext.size()));
    os.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    for (const auto& e : params.entries())
        os.write(reinterpret_cast<const char*>(e.values.data()),
                 static_cast<std::streamsize>(e.values.size() * sizeof(float)));
    if (!os) throw ParseError("write failed: " + path.string());
}

NamedParamSet load_nps1(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError("cannot open: " + path.string());

    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ParseError("not an NPS1 file: " + path.string());

    const uint32_t hlen = read_u32_le(is);
    std::string htext(hlen, '\0');
    is.read(htext.data(), hlen);
    if (!is) throw ParseError("truncated header: " + path.string());

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(htext);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad NPS1 header JSON: " + std::string(e.what()));
    }
    if (!header.is_array()) throw ParseError("NPS1 header must be an array");

    NamedParamSet params;
    size_t expected_offset = 0;
    for (const auto& item : header) {
        const std::string name = item.at("name").get<std::string>();
        const size_t length = item.at("length").get<size_t>();
        const size_t byte_offset = item.at("byte_offset").get<size_t>();
        if (byte_offset != expected_offset)
            throw ParseError("non-contiguous NPS1 payload at '" + name + "'");
        expected_offset += length * sizeof(float);

        std::vector<float> values(length);
        is.read(reinterpret_cast<char*>(values.data()),
                static_cast<std::streamsize>(length * sizeof(float)));
        if (!is) throw ParseError("truncated payload at '" + name + "'");
        params.add(name, std::move(values));
    }
    return params;
}

}  // namespace skt
