#include "doctest.h"
#include "ritz/trace.hpp"
#include "ritz/verify.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace ritz;

namespace {

std::vector<IterationRecord> sample_trace() {
    std::vector<IterationRecord> trace;
    VerifyInstance inst = make_instance(50, 6, 31);
    trace.push_back(make_record(1, inst.report));
    VerifyInstance inst2 = make_instance(50, 6, 32);
    trace.push_back(make_record(2, inst2.report));
    IterationRecord flagged;
    flagged.iter = 3;
    flagged.theta = Complex(1.5, -0.25);
    flagged.flags.set(ReportFlag::ExactPair);
    trace.push_back(flagged);
    return trace;
}

std::string render(const std::vector<IterationRecord>& trace) {
    std::ostringstream out;
    write_trace(out, trace);
    return out.str();
}

}  // namespace

TEST_CASE("trace round trip preserves every field") {
    auto trace = sample_trace();
    std::istringstream in(render(trace));
    auto back = read_trace(in);
    REQUIRE(back.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(back[i].iter == trace[i].iter);
        CHECK(back[i].theta == trace[i].theta);
        CHECK(back[i].r2_y == trace[i].r2_y);
        CHECK(back[i].K == trace[i].K);
        CHECK(back[i].rho_s == trace[i].rho_s);
        CHECK(back[i].sigma_sq == trace[i].sigma_sq);
        CHECK(back[i].tau == trace[i].tau);
        CHECK(back[i].znorm_sq == trace[i].znorm_sq);
        CHECK(back[i].L == trace[i].L);
        CHECK(back[i].U == trace[i].U);
        CHECK(back[i].ratio == trace[i].ratio);
        CHECK(back[i].sigma_pred_lo == trace[i].sigma_pred_lo);
        CHECK(back[i].sigma_pred_hi == trace[i].sigma_pred_hi);
        CHECK(back[i].alpha3 == trace[i].alpha3);
        CHECK(back[i].flags.bits == trace[i].flags.bits);
    }
}

TEST_CASE("trace serialization is deterministic") {
    auto a = render(sample_trace());
    auto b = render(sample_trace());
    CHECK(a == b);
    CHECK(a.substr(0, a.find('\n')) == kTraceHeader);
}

TEST_CASE("write_trace rejects a row violating its own bounds") {
    IterationRecord bad;
    bad.iter = 1;
    bad.sigma_sq = 1.0;
    bad.ratio = 10.0;
    bad.L = 1.5;
    bad.U = 5.0;  // ratio outside [L, U], no flag to excuse it
    std::ostringstream out;
    CHECK_THROWS_AS(write_trace(out, {bad}), Error);

    bad.flags.set(ReportFlag::TauDegenerate);
    std::ostringstream out2;
    CHECK_NOTHROW(write_trace(out2, {bad}));
}

TEST_CASE("read_trace error paths") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_trace(empty), BadTraceError);

    std::istringstream wrong_header("iteration,theta\n1,2\n");
    CHECK_THROWS_AS(read_trace(wrong_header), BadTraceError);

    std::istringstream no_rows(std::string(kTraceHeader) + "\n");
    CHECK_THROWS_AS(read_trace(no_rows), BadTraceError);

    std::istringstream short_row(std::string(kTraceHeader) + "\n1,2,3\n");
    CHECK_THROWS_AS(read_trace(short_row), BadTraceError);

    CHECK_THROWS_AS(read_trace_file("definitely_missing.csv"), BadTraceError);
}

TEST_CASE("plot scripts reference the trace and annotate flagged rows") {
    const std::string trace_path = "trace_for_plots.csv";
    write_trace_file(trace_path, sample_trace());
    auto written = emit_plot_scripts(trace_path, ".");
    REQUIRE(written.size() == 3);
    for (const auto& path : written) {
        std::ifstream in(path);
        REQUIRE(in.good());
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        CHECK(text.find(trace_path) != std::string::npos);
        CHECK(text.find("ExactPair") != std::string::npos);
        CHECK(text.find("plot ") != std::string::npos);
    }
    CHECK(std::ifstream("./plot_znorm.gp").good());
    CHECK(std::ifstream("./plot_ratio.gp").good());
    CHECK(std::ifstream("./plot_tau.gp").good());
    for (const auto& path : written) std::remove(path.c_str());
    std::remove(trace_path.c_str());
}

TEST_CASE("emit_plot_scripts validates the trace first") {
    const std::string path = "broken_trace.csv";
    {
        std::ofstream out(path);
        out << "not,a,trace\n";
    }
    CHECK_THROWS_AS(emit_plot_scripts(path, "."), BadTraceError);
    std::remove(path.c_str());
}
