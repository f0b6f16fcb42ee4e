// SPDX-License-Identifier: Apache-2.0

#include "polprobe/csv_io.hpp"

#include <cstdio>
#include <sstream>

namespace polprobe::csv {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_comment(std::ostream& os, std::string_view text)
{
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos)
            nl = text.size();
        os << "# " << text.substr(start, nl - start) << '\n';
        start = nl + 1;
    }
}

void write_dual_stream(std::ostream& os, std::span<const Complex> x, std::span<const Complex> y,
                       std::string_view comment)
{
    if (x.size() != y.size())
        throw ArgumentError("write_dual_stream: stream lengths differ");
    write_comment(os, comment);
    os << "n,re_x,im_x,re_y,im_y\n";
    for (std::size_t n = 0; n < x.size(); ++n)
        os << n << ',' << format_double(x[n].real()) << ',' << format_double(x[n].imag()) << ','
           << format_double(y[n].real()) << ',' << format_double(y[n].imag()) << '\n';
}

void write_sequence(std::ostream& os, const DualPolSequence& seq, std::string_view comment)
{
    write_dual_stream(os, seq.pol_x, seq.pol_y, comment);
}

void write_received(std::ostream& os, const ReceivedField& rx, std::string_view comment)
{
    write_dual_stream(os, rx.rx_x, rx.rx_y, comment);
}

void write_spectrogram(std::ostream& os, const Spectrogram& sg, std::string_view comment)
{
    write_comment(os, comment);
    os << "# window_len=" << sg.window_len << " hop=" << sg.hop << " windows=" << sg.windows << '\n';
    for (std::size_t w = 0; w < sg.windows; ++w) {
        for (std::size_t b = 0; b < sg.window_len; ++b) {
            if (b)
                os << ',';
            os << format_double(sg.at(w, b));
        }
        os << '\n';
    }
}

void write_taps(std::ostream& os, std::span<const Jones> taps, std::string_view comment)
{
    write_comment(os, comment);
    os << "i,re_h00,im_h00,re_h01,im_h01,re_h10,im_h10,re_h11,im_h11\n";
    for (std::size_t i = 0; i < taps.size(); ++i) {
        os << i;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                os << ',' << format_double(taps[i](r, c).real()) << ',' << format_double(taps[i](r, c).imag());
        os << '\n';
    }
}

std::string describe(const ChannelRealization& ch)
{
    std::ostringstream os;
    os << "fiber_length_m=" << format_double(ch.fiber_length) << " segment_length_m=" << format_double(ch.segment_length)
       << " alpha_db_km=" << format_double(ch.alpha_db_per_km) << " fiber_speed_m_s=" << format_double(ch.fiber_speed)
       << " symbol_rate=" << format_double(ch.symbol_rate) << " taps=" << ch.size() << " seed=" << ch.seed;
    return os.str();
}

void write_channel(std::ostream& os, const ChannelRealization& ch, std::string_view comment)
{
    write_comment(os, comment);
    write_taps(os, ch.taps, describe(ch));
}

void write_response(std::ostream& os, const EstimatedResponse& est, std::string_view comment)
{
    write_comment(os, comment);
    os << "# scheme=" << to_string(est.scheme) << " valid_span=" << est.valid_span.begin << ',' << est.valid_span.end
       << '\n';
    write_taps(os, est.taps);
}

void write_error_curve(std::ostream& os, const ErrorCurve& curve, std::string_view comment)
{
    write_comment(os, comment);
    os << "distance_m,det_rel_err,phase_err_rad,scheme,seed_count\n";
    for (std::size_t i = 0; i < curve.distances.size(); ++i)
        os << format_double(curve.distances[i]) << ',' << format_double(curve.det_rel_error[i]) << ','
           << format_double(curve.phase_error[i]) << ',' << curve.scheme << ',' << curve.seed_count << '\n';
}

}  // namespace polprobe::csv
