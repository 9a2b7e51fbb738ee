#include "guitune/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>

#include "guitune/audio.hpp"
#include "guitune/error.hpp"

namespace guitune {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t u16le(const std::byte* p) {
  return static_cast<std::uint16_t>(std::to_integer<unsigned>(p[0]) | (std::to_integer<unsigned>(p[1]) << 8));
}

std::uint32_t u32le(const std::byte* p) {
  return static_cast<std::uint32_t>(u16le(p)) | (static_cast<std::uint32_t>(u16le(p + 2)) << 16);
}

bool tag_is(const std::byte* p, std::string_view tag) { return std::memcmp(p, tag.data(), 4) == 0; }

struct Chunks {
  WavDescriptor format;
  std::uint16_t format_tag = 0;
  std::span<const std::byte> data;
};

Chunks parse_chunks(std::span<const std::byte> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") || !tag_is(bytes.data() + 8, "WAVE"))
    throw ParseError("not a RIFF/WAVE file");

  std::optional<Chunks> fmt;
  std::optional<std::span<const std::byte>> data;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::byte* header = bytes.data() + pos;
    const std::size_t size = u32le(header + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) throw ParseError("WAV chunk runs past the end of the file");

    if (tag_is(header, "fmt ")) {
      if (size < 16) throw ParseError("WAV fmt chunk is too short");
      const std::byte* f = bytes.data() + body;
      Chunks c;
      c.format_tag = u16le(f);
      c.format.channels = u16le(f + 2);
      c.format.sample_rate = static_cast<int>(u32le(f + 4));
      c.format.bits_per_sample = u16le(f + 14);
      if (c.format_tag == kFormatExtensible) {
        if (size < 40) throw ParseError("WAV extensible fmt chunk is too short");
        c.format_tag = u16le(f + 24);  // first two bytes of the sub-format GUID
      }
      fmt = c;
    } else if (tag_is(header, "data")) {
      data = bytes.subspan(body, size);
    }
    pos = body + size + (size & 1u);  // chunks are word aligned
  }

  if (!fmt) throw ParseError("WAV file has no fmt chunk");
  if (!data) throw ParseError("WAV file has no data chunk");
  if (fmt->format.channels == 0) throw ParseError("WAV fmt chunk declares zero channels");
  if (fmt->format.sample_rate <= 0) throw ParseError("WAV fmt chunk declares a zero sample rate");
  if (fmt->format.bits_per_sample == 0) throw ParseError("WAV fmt chunk declares zero bits per sample");

  Chunks out = *fmt;
  out.data = *data;
  const std::size_t frame_bytes =
      static_cast<std::size_t>(out.format.channels) * ((static_cast<std::size_t>(out.format.bits_per_sample) + 7) / 8);
  out.format.num_frames = out.data.size() / frame_bytes;
  return out;
}

std::string supported_rates_text() {
  std::string text;
  for (int rate : kSupportedRates) {
    if (!text.empty()) text += ", ";
    text += std::to_string(rate);
  }
  return text + " Hz";
}

void put16(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(static_cast<std::byte>(v & 0xFF));
  out.push_back(static_cast<std::byte>(v >> 8));
}

void put32(std::vector<std::byte>& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v & 0xFFFF));
  put16(out, static_cast<std::uint16_t>(v >> 16));
}

void put_tag(std::vector<std::byte>& out, std::string_view tag) {
  for (char c : tag) out.push_back(static_cast<std::byte>(c));
}

}  // namespace

WavDescriptor inspect_wav(std::span<const std::byte> bytes) { return parse_chunks(bytes).format; }

SampleBuffer<double> to_canonical_rate(const SampleBuffer<double>& buffer) {
  switch (buffer.sample_rate) {
    case 8000: return buffer;
    case 16000: return decimate(buffer, 2);
    case 48000: return decimate(buffer, 6);
    default:
      throw UnsupportedRate("unsupported sample rate " + std::to_string(buffer.sample_rate) +
                            " Hz; accepted rates are " + supported_rates_text());
  }
}

SampleBuffer<double> read_wav(std::span<const std::byte> bytes) {
  const Chunks chunks = parse_chunks(bytes);
  const WavDescriptor& d = chunks.format;
  if (chunks.format_tag != kFormatPcm) throw UnsupportedFormat("only integer PCM WAV files are supported");
  if (d.channels != 1)
    throw UnsupportedFormat("only mono WAV files are supported (file has " + std::to_string(d.channels) +
                            " channels)");
  if (d.bits_per_sample != 16)
    throw UnsupportedFormat("only 16-bit WAV files are supported (file has " + std::to_string(d.bits_per_sample) +
                            " bits)");
  if (std::find(kSupportedRates.begin(), kSupportedRates.end(), d.sample_rate) == kSupportedRates.end())
    throw UnsupportedRate("unsupported sample rate " + std::to_string(d.sample_rate) + " Hz; accepted rates are " +
                          supported_rates_text());
  if (d.num_frames == 0) throw ParseError("WAV data chunk holds no samples");

  Eigen::ArrayXd samples(static_cast<Eigen::Index>(d.num_frames));
  for (std::size_t i = 0; i < d.num_frames; ++i)
    samples(static_cast<Eigen::Index>(i)) = static_cast<std::int16_t>(u16le(chunks.data.data() + 2 * i)) / 32768.0;
  return to_canonical_rate(SampleBuffer<double>(std::move(samples), d.sample_rate));
}

SampleBuffer<double> read_wav_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::vector<char> raw{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return read_wav(std::as_bytes(std::span(raw)));
}

std::vector<std::byte> write_wav(const SampleBuffer<double>& buffer) {
  if (buffer.sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  const auto frames = static_cast<std::uint32_t>(buffer.size());
  const std::uint32_t data_bytes = frames * 2;

  std::vector<std::byte> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(buffer.sample_rate));
  put32(out, static_cast<std::uint32_t>(buffer.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_bytes);
  for (Eigen::Index i = 0; i < buffer.size(); ++i) {
    const double scaled = std::clamp(std::round(buffer.samples(i) * 32768.0), -32768.0, 32767.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

void write_wav_file(const std::filesystem::path& path, const SampleBuffer<double>& buffer) {
  const auto bytes = write_wav(buffer);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace guitune
