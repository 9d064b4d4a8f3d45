#include "rcmu/campaign_io.hpp"

#include "rcmu/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace rcmu {

namespace fs = std::filesystem;

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    if (ec != std::errc{}) throw Error("failed to format number");
    return std::string(buf, end);
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    s = trim(s);
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

struct ManifestEntry {
    MeasurementMeta meta;
    std::string relative_path;
    std::size_t line = 0;
};

std::vector<Complex> read_samples(const fs::path& path, const FrequencyGrid& freqs, const StirringLayout& layout) {
    const std::string file = path.string();
    std::ifstream in(path);
    if (!in) throw FormatError(file, 0, "cannot open sample file");

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw FormatError(file, 1, "missing header");
    ++line_no;
    if (trim(line) != kSampleHeader) throw FormatError(file, line_no, "bad header, expected '" + std::string(kSampleHeader) + "'");

    const std::size_t expected = freqs.count * layout.n_eff();
    std::vector<Complex> samples;
    samples.reserve(expected);
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 5) throw FormatError(file, line_no, "expected 5 columns");
        const std::size_t k = samples.size();
        if (k >= expected)
            throw FormatError(file, line_no, "dimension mismatch: more than " + std::to_string(expected) + " data rows");
        const std::size_t want_f = k / layout.n_eff();
        const std::size_t want_tt = (k / layout.sp_tt) % layout.n_tt;
        const std::size_t want_s = k % layout.sp_tt;
        const auto f = parse_number<std::size_t>(fields[0]);
        const auto tt = parse_number<std::size_t>(fields[1]);
        const auto s = parse_number<std::size_t>(fields[2]);
        if (!f || !tt || !s) throw FormatError(file, line_no, "malformed index");
        if (*f != want_f || *tt != want_tt || *s != want_s)
            throw FormatError(file, line_no,
                              "dimension mismatch: expected row (" + std::to_string(want_f) + "," +
                                  std::to_string(want_tt) + "," + std::to_string(want_s) + "), got (" +
                                  std::to_string(*f) + "," + std::to_string(*tt) + "," + std::to_string(*s) + ")");
        const auto re = parse_number<double>(fields[3]);
        const auto im = parse_number<double>(fields[4]);
        if (!re || !im) throw FormatError(file, line_no, "malformed number");
        if (!std::isfinite(*re) || !std::isfinite(*im)) throw FormatError(file, line_no, "non-finite sample value");
        samples.emplace_back(*re, *im);
    }
    if (samples.size() != expected)
        throw FormatError(file, line_no,
                          "dimension mismatch: expected " + std::to_string(expected) + " data rows, got " +
                              std::to_string(samples.size()));
    return samples;
}

std::string sanitize_file_stem(const std::string& id) {
    std::string stem;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_' || c == '.';
        stem += ok ? c : '_';
    }
    return stem;
}

}  // namespace

Campaign load_campaign(const fs::path& manifest_path) {
    const std::string file = manifest_path.string();
    std::ifstream in(manifest_path);
    if (!in) throw FormatError(file, 0, "cannot open manifest");

    std::map<std::string, std::string, std::less<>> header;
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        if (const auto eq = text.find('='); eq != std::string_view::npos && text.find(',') == std::string_view::npos) {
            if (!entries.empty()) throw FormatError(file, line_no, "header key after measurement rows");
            header[std::string(trim(text.substr(0, eq)))] = std::string(trim(text.substr(eq + 1)));
            continue;
        }
        const auto fields = split(text, ',');
        if (fields.size() != 6) throw FormatError(file, line_no, "expected 'id,z,r,o,p,relative_sample_path'");
        if (trim(fields[0]) == "id" && trim(fields[5]) == "relative_sample_path") continue;
        ManifestEntry e;
        e.line = line_no;
        e.meta.id = std::string(trim(fields[0]));
        if (e.meta.id.empty()) throw FormatError(file, line_no, "empty measurement id");
        try {
            e.meta.set_level(Factor::Z, parse_level(Factor::Z, trim(fields[1])));
            e.meta.set_level(Factor::R, parse_level(Factor::R, trim(fields[2])));
            e.meta.set_level(Factor::O, parse_level(Factor::O, trim(fields[3])));
            e.meta.set_level(Factor::P, parse_level(Factor::P, trim(fields[4])));
        } catch (const FormatError&) {
            throw;
        } catch (const Error& err) {
            throw FormatError(file, line_no, err.what());
        }
        e.relative_path = std::string(trim(fields[5]));
        entries.push_back(std::move(e));
    }

    auto required = [&](const char* key) -> std::string_view {
        const auto it = header.find(key);
        if (it == header.end()) throw FormatError(file, line_no, std::string("missing header key '") + key + "='");
        return it->second;
    };
    auto integer = [&](const char* key) {
        const auto v = parse_number<std::int64_t>(required(key));
        if (!v) throw FormatError(file, 0, std::string("header key '") + key + "' is not an integer");
        return *v;
    };
    FrequencyGrid freqs{integer("freq_start_hz"), integer("freq_step_hz"), 0};
    const auto count = integer("freq_count");
    const auto n_tt = integer("n_tt");
    const auto sp_tt = integer("sp_tt");
    if (count < 1 || n_tt < 1 || sp_tt < 2 || freqs.step_hz <= 0)
        throw FormatError(file, 0, "invalid grid header (need freq_count>=1, freq_step_hz>0, n_tt>=1, sp_tt>=2)");
    freqs.count = static_cast<std::size_t>(count);
    const StirringLayout layout{static_cast<std::size_t>(n_tt), static_cast<std::size_t>(sp_tt)};

    std::set<std::string> ids;
    std::vector<SampleGrid> grids;
    grids.reserve(entries.size());
    for (auto& e : entries) {
        if (!ids.insert(e.meta.id).second) throw FormatError(file, e.line, "duplicate measurement id '" + e.meta.id + "'");
        const fs::path sample_path = manifest_path.parent_path() / e.relative_path;
        auto samples = read_samples(sample_path, freqs, layout);
        grids.emplace_back(std::move(e.meta), freqs, layout, std::move(samples));
    }
    return Campaign(std::move(grids));
}

fs::path save_campaign(const Campaign& campaign, const fs::path& dir) {
    if (campaign.empty()) throw Error("campaign must contain at least one measurement");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create directory '" + dir.string() + "': " + ec.message());

    const auto& freqs = campaign.freqs();
    const auto& layout = campaign.layout();
    const fs::path manifest_path = dir / kManifestName;
    std::ofstream manifest(manifest_path);
    if (!manifest) throw Error("cannot write '" + manifest_path.string() + "'");
    manifest << "freq_start_hz=" << freqs.start_hz << '\n'
             << "freq_step_hz=" << freqs.step_hz << '\n'
             << "freq_count=" << freqs.count << '\n'
             << "n_tt=" << layout.n_tt << '\n'
             << "sp_tt=" << layout.sp_tt << '\n'
             << "id,z,r,o,p,relative_sample_path\n";

    std::set<std::string> used;
    for (const auto& grid : campaign.measurements()) {
        const auto& meta = grid.meta();
        if (meta.id.find_first_of(",\n\r") != std::string::npos)
            throw Error("measurement id '" + meta.id + "' contains a separator character");
        std::string name = sanitize_file_stem(meta.id) + ".csv";
        for (int suffix = 1; !used.insert(name).second; ++suffix)
            name = sanitize_file_stem(meta.id) + "_" + std::to_string(suffix) + ".csv";

        manifest << meta.id << ',' << level_name(Factor::Z, meta.level(Factor::Z)) << ','
                 << level_name(Factor::R, meta.level(Factor::R)) << ',' << level_name(Factor::O, meta.level(Factor::O))
                 << ',' << level_name(Factor::P, meta.level(Factor::P)) << ',' << name << '\n';

        std::ofstream out(dir / name);
        if (!out) throw Error("cannot write '" + (dir / name).string() + "'");
        out << kSampleHeader << '\n';
        std::string row;
        for (std::size_t f = 0; f < freqs.count; ++f)
            for (std::size_t tt = 0; tt < layout.n_tt; ++tt)
                for (std::size_t s = 0; s < layout.sp_tt; ++s) {
                    const Complex& v = grid.at(f, tt, s);
                    row.clear();
                    row += std::to_string(f);
                    row += ',';
                    row += std::to_string(tt);
                    row += ',';
                    row += std::to_string(s);
                    row += ',';
                    row += format_double(v.real());
                    row += ',';
                    row += format_double(v.imag());
                    row += '\n';
                    out << row;
                }
        if (!out) throw Error("I/O failure writing '" + (dir / name).string() + "'");
    }
    if (!manifest) throw Error("I/O failure writing '" + manifest_path.string() + "'");
    return manifest_path;
}

}  // namespace rcmu
