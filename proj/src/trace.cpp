#include "ritz/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ritz {

const char* const kTraceHeader =
    "iter,theta_re,theta_im,r2_y,K,rho_s,sigma_sq,tau,znorm_sq,L,U,ratio,"
    "sigma_pred_lo,sigma_pred_hi,alpha3,flags";

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ReportFlags parse_flags(const std::string& s) {
    ReportFlags f;
    if (s.find("ExactPair") != std::string::npos) f.set(ReportFlag::ExactPair);
    if (s.find("ZeroCorrection") != std::string::npos) f.set(ReportFlag::ZeroCorrection);
    if (s.find("TauDegenerate") != std::string::npos) f.set(ReportFlag::TauDegenerate);
    if (s.find("OrthogonalZr") != std::string::npos) f.set(ReportFlag::OrthogonalZr);
    if (s.find("BoundGap") != std::string::npos) f.set(ReportFlag::BoundGap);
    return f;
}

}  // namespace

void write_trace(std::ostream& out, const std::vector<IterationRecord>& trace) {
    out << kTraceHeader << "\n";
    for (const auto& r : trace) {
        // re-check the bound at write time so a bad row cannot slip into a
        // figure unnoticed
        if (!r.flags.any() && r.sigma_sq > 0 && r.ratio > 0) {
            if (r.ratio < r.L * (1 - 1e-9) || r.ratio > r.U * (1 + 1e-9))
                throw Error("trace row " + std::to_string(r.iter) +
                            ": K/sigma^2 outside [L, U]");
        }
        out << r.iter << ',' << fmt(r.theta.real()) << ',' << fmt(r.theta.imag()) << ','
            << fmt(r.r2_y) << ',' << fmt(r.K) << ',' << fmt(r.rho_s) << ','
            << fmt(r.sigma_sq) << ',' << fmt(r.tau) << ',' << fmt(r.znorm_sq) << ','
            << fmt(r.L) << ',' << fmt(r.U) << ',' << fmt(r.ratio) << ','
            << fmt(r.sigma_pred_lo) << ',' << fmt(r.sigma_pred_hi) << ','
            << fmt(r.alpha3) << ',' << to_string(r.flags) << "\n";
    }
}

void write_trace_file(const std::string& path, const std::vector<IterationRecord>& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write trace: " + path);
    write_trace(out, trace);
}

std::vector<IterationRecord> read_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw BadTraceError("BadTrace: empty trace");
    if (line != kTraceHeader) throw BadTraceError("BadTrace: unexpected header");
    std::vector<IterationRecord> trace;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream iss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(iss, field, ',')) fields.push_back(field);
        if (fields.size() != 16) throw BadTraceError("BadTrace: bad column count");
        IterationRecord r;
        std::size_t i = 0;
        r.iter = std::stoull(fields[i++]);
        const double th_re = std::stod(fields[i++]);
        const double th_im = std::stod(fields[i++]);
        r.theta = Complex(th_re, th_im);
        r.r2_y = std::stod(fields[i++]);
        r.K = std::stod(fields[i++]);
        r.rho_s = std::stod(fields[i++]);
        r.sigma_sq = std::stod(fields[i++]);
        r.tau = std::stod(fields[i++]);
        r.znorm_sq = std::stod(fields[i++]);
        r.L = std::stod(fields[i++]);
        r.U = std::stod(fields[i++]);
        r.ratio = std::stod(fields[i++]);
        r.sigma_pred_lo = std::stod(fields[i++]);
        r.sigma_pred_hi = std::stod(fields[i++]);
        r.alpha3 = std::stod(fields[i++]);
        r.flags = parse_flags(fields[i++]);
        trace.push_back(r);
    }
    if (trace.empty()) throw BadTraceError("BadTrace: no data rows");
    return trace;
}

std::vector<IterationRecord> read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadTraceError("BadTrace: cannot read " + path);
    return read_trace(in);
}

std::vector<std::string> emit_plot_scripts(const std::string& trace_path,
                                           const std::string& out_dir) {
    auto trace = read_trace_file(trace_path);  // validates the schema

    struct Spec {
        const char* file;
        const char* title;
        const char* body;
    };
    const Spec specs[] = {
        {"plot_znorm.gp", "||(I-yy*)z||^2 per iteration",
         "set logscale y\n"
         "plot TRACE using 1:9 with linespoints title 'znorm_sq'\n"},
        {"plot_ratio.gp", "K/sigma^2 and its bounds per iteration",
         "plot TRACE using 1:12 with linespoints title 'K/sigma^2', \\\n"
         "     TRACE using 1:10 with lines title 'L', \\\n"
         "     TRACE using 1:11 with lines title 'U'\n"},
        {"plot_tau.gp", "tau per iteration",
         "plot TRACE using 1:8 with linespoints title 'tau'\n"},
    };

    // flagged rows are annotated with labels rather than dropped
    std::string labels;
    for (const auto& r : trace) {
        if (r.flags.any())
            labels += "set label '" + to_string(r.flags) + "' at " +
                      std::to_string(r.iter) + ", graph 0.95\n";
    }

    std::vector<std::string> written;
    for (const auto& spec : specs) {
        const std::string path = out_dir + "/" + spec.file;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write plot script: " + path);
        out << "# gnuplot script generated from " << trace_path << "\n"
            << "TRACE = '" << trace_path << "'\n"
            << "set datafile separator ','\n"
            << "set key top right\n"
            << "set xlabel 'iteration'\n"
            << "set title '" << spec.title << "'\n"
            << labels << spec.body;
        written.push_back(path);
    }
    return written;
}

}  // namespace ritz
