// io.hpp — bit-exact readers/writers: spectra, click streams (binary + text
// twins), correlation histograms, polarization manifests, key=value configs,
// JSON analysis reports, and deterministic SVG plots.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "emitterlab/photon.hpp"
#include "emitterlab/spectrum.hpp"

namespace eml {

// ---- spectra ------------------------------------------------------------
// Text format: '#' key=value header lines, then "x<TAB>counts[<TAB>sigma]"
// with fixed 6-decimal formatting. Canonical files round-trip byte-exactly.
Spectrum read_spectrum(const std::string& path);
void write_spectrum(const Spectrum& spectrum, const std::string& path);

// ---- click streams ------------------------------------------------------
enum class TimetagFormat { binary, text };

// Binary layout: 16-byte magic block ("EMLTTAG1" + 8 NUL), little-endian
// u32 version (= 1), u32 record count, then 16-byte records of u16 channel,
// 6 zero pad bytes, u64 timestamp_ps. Records are sorted by (timestamp,
// channel). The text twin holds "channel<TAB>timestamp_ps" lines in the same
// order. read_timetags sniffs the magic to pick the decoder.
ClickStream read_timetags(const std::string& path);
void write_timetags(const ClickStream& stream, const std::string& path,
                    TimetagFormat format = TimetagFormat::binary);

// ---- correlation histograms ---------------------------------------------
// '#' metadata (bin_width_ps, range_ps, total_starts, total_stops), then
// "delay_ps<TAB>counts" per bin (delay = bin center).
CorrelationHistogram read_histogram(const std::string& path);
void write_histogram(const CorrelationHistogram& hist, const std::string& path);

// ---- polarization manifests ---------------------------------------------
struct PolarizationManifest {
    std::string angle_convention;  // "analyzer" or "half_wave_plate"
    // angle (degrees) -> spectrum path, resolved against the manifest dir.
    std::vector<std::pair<double, std::string>> entries;
};

// key=value lines: "angle_convention = ..." plus one "<angle> = <path>" per
// spectrum. Duplicate angles and unresolvable paths are errors.
PolarizationManifest read_manifest(const std::string& path);

// ---- configs ------------------------------------------------------------
enum class ConfigType { real, integer, text, boolean };

struct ConfigKey {
    std::string name;
    ConfigType type;
};

using ConfigValue = std::variant<double, long long, std::string, bool>;

// key=value lines with '#' comments. Keys outside `schema` are rejected by
// name; duplicates and type mismatches are errors; an empty file yields an
// empty map (callers keep their defaults).
std::map<std::string, ConfigValue> read_config(const std::string& path,
                                               const std::vector<ConfigKey>& schema);

// ---- analysis reports ---------------------------------------------------
struct ReportParameter {
    std::string name;
    double value{0.0};
    double sigma{0.0};
    std::string unit;
};

struct ReportInput {
    std::string path;
    std::string digest;  // FNV-1a 64-bit of the file contents, 16 hex digits
};

struct Report {
    std::string tool_version;
    std::string timestamp_utc;  // the only field allowed to vary between
                                // identical re-runs
    std::string invocation;
    std::uint64_t seed{0};
    bool seed_used{false};
    std::vector<ReportInput> inputs;
    std::vector<ReportParameter> parameters;
    std::vector<std::pair<std::string, std::string>> flags;
    std::vector<std::string> notes;
};

Report read_report(const std::string& path);
void write_report(const Report& report, const std::string& path);

// FNV-1a 64-bit digest of a file's bytes as 16 lowercase hex digits.
std::string file_digest(const std::string& path);

// Current UTC time formatted as ISO-8601 (seconds resolution).
std::string utc_timestamp();

// ---- SVG plots ----------------------------------------------------------
enum class PlotStyle { line, scatter, histogram };

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y{false};
};

// Standalone deterministic SVG with axes, tick labels and a legend.
void emit_svg_plot(const std::vector<PlotSeries>& series, PlotStyle style,
                   const PlotOptions& options, const std::string& path);

}  // namespace eml
