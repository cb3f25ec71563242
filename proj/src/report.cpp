#include <lorasat/report.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lorasat {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::string profile_name(const DopplerProfile& p) {
    switch (p.kind()) {
    case DopplerProfile::Kind::Zero: return "zero";
    case DopplerProfile::Kind::Static: return "static";
    case DopplerProfile::Kind::LinearRamp: return "linear-ramp";
    case DopplerProfile::Kind::LeoPass: return "leo-pass";
    }
    return "zero";
}

std::string opt_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

ResultRow make_result_row(const SweepCell& cell, const CellResult& result) {
    const ScenarioConfig& sc = cell.scenario;
    ResultRow row;
    row.estimator = std::string(to_string(sc.estimator));
    row.sf = sc.modem.sf;
    row.bandwidth_hz = sc.modem.bandwidth_hz;
    row.ldro = sc.modem.ldro;
    row.oversampling = sc.modem.oversampling;
    row.profile = profile_name(sc.profile);
    row.t_start_s = sc.t_start_s;
    row.esn0_db = sc.esn0_db;
    row.snr_db = sc.snr_db;
    row.payload_bits = sc.payload_bits;
    row.coding_rate = sc.coding_rate;
    row.n_up = sc.n_up;
    row.n_dw = sc.n_dw;
    row.n_int = sc.n_int;
    row.trials = sc.trials;
    row.errors = result.point.errors;
    row.totals = result.point.total;
    row.ser = result.point.ser;
    row.ci_lo = result.point.ci_lo;
    row.ci_hi = result.point.ci_hi;
    row.seed = sc.master_seed;
    row.status = result.failed ? result.error : "ok";
    return row;
}

std::string csv_header() {
    return "estimator,sf,bandwidth_hz,ldro,oversampling,profile,t_start_s,"
           "esn0_db,snr_db,payload_bits,coding_rate,n_up,n_dw,n_int,trials,"
           "errors,totals,ser,ci_lo,ci_hi,seed,status";
}

std::string to_csv_line(const ResultRow& r) {
    std::ostringstream os;
    os << r.estimator << ',' << r.sf << ',' << format_double(r.bandwidth_hz) << ','
       << (r.ldro ? 1 : 0) << ',' << r.oversampling << ',' << r.profile << ','
       << format_double(r.t_start_s) << ',' << opt_field(r.esn0_db) << ','
       << opt_field(r.snr_db) << ',' << r.payload_bits << ',' << r.coding_rate << ','
       << r.n_up << ',' << r.n_dw << ',' << r.n_int << ',' << r.trials << ','
       << r.errors << ',' << r.totals << ',' << format_double(r.ser) << ','
       << format_double(r.ci_lo) << ',' << format_double(r.ci_hi) << ','
       << r.seed << ',' << r.status;
    return os.str();
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::string out = csv_header();
    out.push_back('\n');
    for (const auto& r : rows) {
        out += to_csv_line(r);
        out.push_back('\n');
    }
    return out;
}

std::vector<ResultRow> parse_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("parse_csv: empty input");
    if (line != csv_header()) throw std::invalid_argument("parse_csv: unexpected header");

    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 22) throw std::invalid_argument("parse_csv: wrong field count");
        ResultRow r;
        std::size_t i = 0;
        r.estimator = f[i++];
        r.sf = std::stoi(f[i++]);
        r.bandwidth_hz = std::stod(f[i++]);
        r.ldro = std::stoi(f[i++]) != 0;
        r.oversampling = std::stoi(f[i++]);
        r.profile = f[i++];
        r.t_start_s = std::stod(f[i++]);
        r.esn0_db = f[i].empty() ? std::nullopt : std::optional<double>(std::stod(f[i]));
        ++i;
        r.snr_db = f[i].empty() ? std::nullopt : std::optional<double>(std::stod(f[i]));
        ++i;
        r.payload_bits = static_cast<std::uint32_t>(std::stoul(f[i++]));
        r.coding_rate = std::stoi(f[i++]);
        r.n_up = std::stoi(f[i++]);
        r.n_dw = std::stoi(f[i++]);
        r.n_int = std::stoi(f[i++]);
        r.trials = std::stoull(f[i++]);
        r.errors = std::stoull(f[i++]);
        r.totals = std::stoull(f[i++]);
        r.ser = std::stod(f[i++]);
        r.ci_lo = std::stod(f[i++]);
        r.ci_hi = std::stod(f[i++]);
        r.seed = std::stoull(f[i++]);
        r.status = f[i++];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string to_json(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ResultRow& r = rows[i];
        if (i) os << ",";
        os << "\n  {\"estimator\":\"" << r.estimator << "\",\"sf\":" << r.sf
           << ",\"bandwidth_hz\":" << format_double(r.bandwidth_hz)
           << ",\"ldro\":" << (r.ldro ? "true" : "false")
           << ",\"oversampling\":" << r.oversampling
           << ",\"profile\":\"" << r.profile << "\""
           << ",\"t_start_s\":" << format_double(r.t_start_s)
           << ",\"esn0_db\":" << (r.esn0_db ? format_double(*r.esn0_db) : "null")
           << ",\"snr_db\":" << (r.snr_db ? format_double(*r.snr_db) : "null")
           << ",\"payload_bits\":" << r.payload_bits
           << ",\"coding_rate\":" << r.coding_rate
           << ",\"n_up\":" << r.n_up << ",\"n_dw\":" << r.n_dw << ",\"n_int\":" << r.n_int
           << ",\"trials\":" << r.trials
           << ",\"errors\":" << r.errors << ",\"totals\":" << r.totals
           << ",\"ser\":" << format_double(r.ser)
           << ",\"ci_lo\":" << format_double(r.ci_lo)
           << ",\"ci_hi\":" << format_double(r.ci_hi)
           << ",\"seed\":" << r.seed
           << ",\"status\":\"" << r.status << "\"}";
    }
    os << "\n]\n";
    return os.str();
}

namespace {

// Minimal static SVG plotting: fixed canvas, log-y SER curves per estimator,
// one panel per SF. The drawing is derived from already-formatted rows only.
struct Canvas {
    std::ostringstream os;
    void open(int w, int h) {
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
           << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
           << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    }
    std::string close() {
        os << "</svg>\n";
        return os.str();
    }
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

} // namespace

std::string ser_curves_svg(const std::vector<ResultRow>& rows) {
    std::set<int> sfs;
    std::set<std::string> estimators;
    double x_min = 1e300, x_max = -1e300;
    for (const auto& r : rows) {
        if (!r.esn0_db || r.status != "ok") continue;
        sfs.insert(r.sf);
        estimators.insert(r.estimator);
        x_min = std::min(x_min, *r.esn0_db);
        x_max = std::max(x_max, *r.esn0_db);
    }
    if (sfs.empty() || x_min >= x_max) {
        Canvas c;
        c.open(320, 60);
        c.os << "<text x=\"10\" y=\"30\" font-family=\"sans-serif\">no plottable rows</text>\n";
        return c.close();
    }

    const int panel_w = 360, panel_h = 300, margin = 50;
    const int width = margin + static_cast<int>(sfs.size()) * (panel_w + margin);
    const int height = panel_h + 2 * margin + 20 * (static_cast<int>(estimators.size()) / 3 + 1);
    const double y_floor = 1e-6; // SER clamped for log scale

    Canvas c;
    c.open(width, height);

    int panel = 0;
    for (int sf : sfs) {
        const int x0 = margin + panel * (panel_w + margin);
        const int y0 = margin;
        c.os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << panel_w
             << "\" height=\"" << panel_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
        c.os << "<text x=\"" << x0 + panel_w / 2 << "\" y=\"" << y0 - 8
             << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">SF "
             << sf << "</text>\n";

        auto x_of = [&](double esn0) {
            return x0 + (esn0 - x_min) / (x_max - x_min) * panel_w;
        };
        auto y_of = [&](double ser) {
            const double v = std::log10(std::max(ser, y_floor));
            return y0 + (0.0 - v) / (0.0 - std::log10(y_floor)) * panel_h;
        };

        // decade gridlines
        for (int dec = 0; dec >= -6; --dec) {
            const double y = y_of(std::pow(10.0, dec));
            c.os << "<line x1=\"" << x0 << "\" y1=\"" << y << "\" x2=\"" << x0 + panel_w
                 << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n"
                 << "<text x=\"" << x0 - 4 << "\" y=\"" << y + 4
                 << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">1e"
                 << dec << "</text>\n";
        }
        c.os << "<text x=\"" << x0 + panel_w / 2 << "\" y=\"" << y0 + panel_h + 28
             << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">Es/N0 [dB]</text>\n";

        int color = 0;
        for (const auto& est : estimators) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& r : rows) {
                if (r.sf != sf || r.estimator != est || !r.esn0_db || r.status != "ok") continue;
                pts.emplace_back(*r.esn0_db, r.ser);
            }
            std::sort(pts.begin(), pts.end());
            if (pts.empty()) {
                ++color;
                continue;
            }
            c.os << "<polyline fill=\"none\" stroke=\"" << kPalette[color % 7]
                 << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : pts) c.os << x_of(x) << "," << y_of(y) << " ";
            c.os << "\"/>\n";
            ++color;
        }
        ++panel;
    }

    int color = 0, lx = margin, ly = panel_h + margin + 40;
    for (const auto& est : estimators) {
        c.os << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24
             << "\" y2=\"" << ly - 4 << "\" stroke=\"" << kPalette[color % 7]
             << "\" stroke-width=\"2\"/>\n"
             << "<text x=\"" << lx + 30 << "\" y=\"" << ly
             << "\" font-family=\"sans-serif\" font-size=\"11\">" << est << "</text>\n";
        lx += 150;
        if (lx + 140 > width) {
            lx = margin;
            ly += 20;
        }
        ++color;
    }
    return c.close();
}

std::string doppler_profile_csv(const std::vector<DopplerSample>& samples) {
    std::string out = "t_s,doppler_shift_hz,doppler_rate_hz_per_s\n";
    for (const auto& s : samples) {
        out += format_double(s.t_s);
        out.push_back(',');
        out += format_double(s.shift_hz);
        out.push_back(',');
        out += format_double(s.rate_hz_per_s);
        out.push_back('\n');
    }
    return out;
}

std::string doppler_profile_svg(const std::vector<DopplerSample>& samples) {
    Canvas c;
    const int w = 720, h = 420, margin = 60;
    c.open(w, h);
    if (samples.size() < 2) {
        c.os << "<text x=\"10\" y=\"30\" font-family=\"sans-serif\">not enough samples</text>\n";
        return c.close();
    }
    double t_lo = samples.front().t_s, t_hi = samples.back().t_s;
    double s_max = 0, r_max = 0;
    for (const auto& s : samples) {
        s_max = std::max(s_max, std::abs(s.shift_hz));
        r_max = std::max(r_max, std::abs(s.rate_hz_per_s));
    }
    if (s_max == 0) s_max = 1;
    if (r_max == 0) r_max = 1;

    auto x_of = [&](double t) { return margin + (t - t_lo) / (t_hi - t_lo) * (w - 2 * margin); };
    auto y_shift = [&](double v) { return h / 2.0 - v / s_max * (h / 2.0 - margin); };
    auto y_rate = [&](double v) { return h / 2.0 - v / r_max * (h / 2.0 - margin); };

    c.os << "<line x1=\"" << margin << "\" y1=\"" << h / 2 << "\" x2=\"" << w - margin
         << "\" y2=\"" << h / 2 << "\" stroke=\"#bbb\"/>\n";
    for (int pass = 0; pass < 2; ++pass) {
        c.os << "<polyline fill=\"none\" stroke=\"" << (pass == 0 ? "#1f77b4" : "#d62728")
             << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& s : samples)
            c.os << x_of(s.t_s) << ","
                 << (pass == 0 ? y_shift(s.shift_hz) : y_rate(s.rate_hz_per_s)) << " ";
        c.os << "\"/>\n";
    }
    c.os << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f77b4\">"
         << "Doppler shift (max " << format_double(s_max) << " Hz)</text>\n"
         << "<text x=\"" << margin << "\" y=\"40\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">"
         << "Doppler rate (max " << format_double(r_max) << " Hz/s)</text>\n"
         << "<text x=\"" << w / 2 << "\" y=\"" << h - 16
         << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">t [s]</text>\n";
    return c.close();
}

} // namespace lorasat
