#include "scratch_anomalies/zip_reader.hpp"

#include "scratch_anomalies/errors.hpp"

#include <zlib.h>

#include <cstdint>
#include <fstream>
#include <sstream>

namespace scratch_anomalies {

namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfCentralDirSig = 0x06054b50;
constexpr std::size_t kEndOfCentralDirSize = 22;
constexpr std::size_t kCentralHeaderSize = 46;
constexpr std::size_t kLocalHeaderSize = 30;

class ByteView {
public:
    explicit ByteView(std::string_view data) : data_(data) {}

    std::uint16_t u16(std::size_t at) const {
        need(at, 2);
        return static_cast<std::uint16_t>(byte(at) | (byte(at + 1) << 8));
    }

    std::uint32_t u32(std::size_t at) const {
        need(at, 4);
        return static_cast<std::uint32_t>(byte(at)) | (static_cast<std::uint32_t>(byte(at + 1)) << 8) |
               (static_cast<std::uint32_t>(byte(at + 2)) << 16) |
               (static_cast<std::uint32_t>(byte(at + 3)) << 24);
    }

    std::string_view slice(std::size_t at, std::size_t len) const {
        need(at, len);
        return data_.substr(at, len);
    }

    std::size_t size() const { return data_.size(); }

private:
    unsigned byte(std::size_t at) const { return static_cast<unsigned char>(data_[at]); }

    void need(std::size_t at, std::size_t len) const {
        if (at > data_.size() || len > data_.size() - at) {
            throw MalformedProject("zip archive is truncated");
        }
    }

    std::string_view data_;
};

std::size_t find_end_of_central_dir(const ByteView& zip) {
    if (zip.size() < kEndOfCentralDirSize) {
        throw MalformedProject("zip archive is too short");
    }
    // The record is followed by a comment of at most 65535 bytes.
    const std::size_t last = zip.size() - kEndOfCentralDirSize;
    const std::size_t first = last > 0xffff ? last - 0xffff : 0;
    for (std::size_t pos = last + 1; pos-- > first;) {
        if (zip.u32(pos) == kEndOfCentralDirSig) {
            return pos;
        }
    }
    throw MalformedProject("zip end-of-central-directory record not found");
}

std::string inflate_raw(std::string_view compressed, std::size_t expected_size) {
    std::string out(expected_size, '\0');
    z_stream stream{};
    if (inflateInit2(&stream, -MAX_WBITS) != Z_OK) {
        throw MalformedProject("cannot initialise inflate");
    }
    stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    stream.avail_in = static_cast<uInt>(compressed.size());
    stream.next_out = reinterpret_cast<Bytef*>(out.data());
    stream.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&stream, Z_FINISH);
    const auto produced = stream.total_out;
    inflateEnd(&stream);
    if (rc != Z_STREAM_END || produced != expected_size) {
        throw MalformedProject("corrupt deflate stream in zip entry");
    }
    return out;
}

}  // namespace

bool looks_like_zip(std::string_view bytes) {
    return bytes.size() >= 4 && ByteView(bytes).u32(0) == kLocalHeaderSig;
}

std::optional<std::string> read_zip_entry(std::string_view archive, std::string_view entry_name) {
    const ByteView zip(archive);
    const std::size_t eocd = find_end_of_central_dir(zip);
    const std::size_t entries = zip.u16(eocd + 10);
    std::size_t pos = zip.u32(eocd + 16);

    for (std::size_t i = 0; i < entries; ++i) {
        if (zip.u32(pos) != kCentralHeaderSig) {
            throw MalformedProject("bad zip central directory header");
        }
        const std::uint16_t method = zip.u16(pos + 10);
        const std::uint32_t crc = zip.u32(pos + 16);
        const std::uint32_t compressed_size = zip.u32(pos + 20);
        const std::uint32_t size = zip.u32(pos + 24);
        const std::uint16_t name_len = zip.u16(pos + 28);
        const std::uint16_t extra_len = zip.u16(pos + 30);
        const std::uint16_t comment_len = zip.u16(pos + 32);
        const std::uint32_t local_offset = zip.u32(pos + 42);
        const std::string_view name = zip.slice(pos + kCentralHeaderSize, name_len);
        pos += kCentralHeaderSize + name_len + extra_len + comment_len;

        if (name != entry_name) {
            continue;
        }
        if (compressed_size == 0xffffffffu || size == 0xffffffffu || local_offset == 0xffffffffu) {
            throw MalformedProject("zip64 archives are not supported");
        }
        if (zip.u32(local_offset) != kLocalHeaderSig) {
            throw MalformedProject("bad zip local file header");
        }
        const std::size_t data_at =
            local_offset + kLocalHeaderSize + zip.u16(local_offset + 26) + zip.u16(local_offset + 28);
        const std::string_view payload = zip.slice(data_at, compressed_size);

        std::string content;
        if (method == 0) {
            if (compressed_size != size) {
                throw MalformedProject("stored zip entry has inconsistent sizes");
            }
            content.assign(payload);
        } else if (method == 8) {
            content = inflate_raw(payload, size);
        } else {
            throw MalformedProject("unsupported zip compression method " + std::to_string(method));
        }

        const auto actual_crc =
            crc32(0L, reinterpret_cast<const Bytef*>(content.data()), static_cast<uInt>(content.size()));
        if (actual_crc != crc) {
            throw MalformedProject("zip entry CRC mismatch for " + std::string(entry_name));
        }
        return content;
    }
    return std::nullopt;
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UnreadableFile("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw UnreadableFile("read error on " + path.string());
    }
    return std::move(buffer).str();
}

}  // namespace scratch_anomalies
