#include "bqke/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bqke/closed_forms.hpp"
#include "bqke/errors.hpp"
#include "bqke/obstruction.hpp"
#include "bqke/report.hpp"
#include "bqke/series.hpp"

namespace bqke::cli {

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

struct RunConfig {
    std::string family = "trivial";
    long n = 1, m = 2, p = 1;
    std::string mode = "exact";
    long digits = 30;
    std::string format = "text";
    std::string out_path;
    long element_cap = 1000000;
    long series_cap = 60;
    long root_a = 1, root_u = 1;
    std::string data_dir = "data";
};

GroupSpec spec_from(const RunConfig& cfg) {
    GroupSpec spec;
    spec.family = family_from_name(cfg.family);
    spec.n = cfg.n;
    spec.m = cfg.m;
    spec.p = cfg.p;
    spec.roots.a = cfg.root_a;
    spec.roots.b = cfg.root_a;  // beta/b follow the a index unless defaulted
    spec.roots.u = cfg.root_u;
    spec.validate();
    return spec;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& payload) {
    if (cfg.out_path.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw InvalidSpecError("cannot open output path: " + cfg.out_path);
    f << payload;
}

std::vector<long> parse_pset(const std::string& csv) {
    std::vector<long> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stol(tok));
    }
    if (out.empty()) throw InvalidSpecError("empty p-set");
    return out;
}

int cmd_compute(const RunConfig& cfg, std::ostream& out) {
    GroupSpec spec = spec_from(cfg);
    ObstructionReport rep = compute_c(spec, {SumStrategy::Auto, cfg.element_cap});
    ReportFormat fmt{cfg.digits};
    if (cfg.format == "json") {
        emit(cfg, out, report_to_json(rep, fmt));
    } else if (cfg.format == "csv") {
        emit(cfg, out, report_to_csv(rep, fmt));
    } else if (cfg.mode == "float") {
        emit(cfg, out,
             "C = " + format_embedded(rep.c_exact, fmt.digits) + "  verdict " +
                 verdict_name(rep.verdict) + "\n");
    } else {
        emit(cfg, out, report_to_text(rep, fmt));
    }
    return kOk;
}

struct GoldenRow {
    long m = 0;  // 0 when absent
    long p = 1;
    std::string value;
};

std::vector<GoldenRow> read_golden(const std::string& path, bool has_m) {
    std::ifstream f(path);
    if (!f) throw InvalidSpecError("cannot open golden table: " + path);
    std::vector<GoldenRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::stringstream ss(line);
        std::string tok;
        GoldenRow row;
        if (has_m) {
            std::getline(ss, tok, ',');
            row.m = std::stol(tok);
        }
        std::getline(ss, tok, ',');
        row.p = std::stol(tok);
        std::getline(ss, tok, ',');
        row.value = tok;
        rows.push_back(row);
    }
    if (rows.empty()) throw InvalidSpecError("golden table is empty: " + path);
    return rows;
}

int cmd_table(const RunConfig& cfg, const std::string& selector, std::ostream& out,
              std::ostream& err) {
    Family fam;
    bool has_m = false;
    std::string file;
    if (selector == "p48") {
        fam = Family::P48;
        file = "appendix_p48.csv";
    } else if (selector == "p120") {
        fam = Family::P120;
        file = "appendix_p120.csv";
    } else if (selector == "pprime") {
        fam = Family::Pprime;
        has_m = true;
        file = "appendix_pprime.csv";
    } else {
        throw InvalidSpecError("unknown table selector: " + selector);
    }
    std::vector<GoldenRow> rows = read_golden(cfg.data_dir + "/" + file, has_m);
    std::ostringstream csv;
    csv << (has_m ? "m,p,C(Gamma)\n" : "p,C(Gamma)\n");
    long mismatches = 0;
    for (const auto& row : rows) {
        GroupSpec spec;
        spec.family = fam;
        spec.m = has_m ? row.m : 2;
        spec.p = row.p;
        ObstructionReport rep = compute_c(spec, {SumStrategy::Auto, cfg.element_cap});
        // Compare as exact rationals: |computed - reference| <= 1e-6 |reference|.
        RationalQ computed = rep.c_exact.embed(40).re.to_rational();
        RationalQ reference = rational_from_decimal(row.value);
        RationalQ diff = computed - reference;
        if (diff < 0) diff = -diff;
        RationalQ tol = (reference < 0 ? -reference : reference) * RationalQ(1, 1000000);
        if (diff > tol) {
            ++mismatches;
            err << "mismatch at " << (has_m ? "m=" + std::to_string(row.m) + " " : "")
                << "p=" << row.p << ": computed " << format_embedded(rep.c_exact, 13)
                << " reference " << row.value << "\n";
        }
        if (has_m) csv << row.m << ",";
        csv << row.p << "," << format_embedded(rep.c_exact, 13) << "\n";
    }
    emit(cfg, out, csv.str());
    return mismatches == 0 ? kOk : kMismatch;
}

struct CheckSink {
    std::ostream& out;
    long failures = 0;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        out << (ok ? "ok   " : "FAIL ") << name;
        if (!ok && !detail.empty()) out << "  [" << detail << "]";
        out << "\n";
        if (!ok) ++failures;
    }
};

std::vector<GroupSpec> default_verify_grid() {
    std::vector<GroupSpec> grid;
    GroupSpec s;
    s.family = Family::Trivial;
    grid.push_back(s);
    for (long p : {2, 3, 5}) {
        s = GroupSpec{};
        s.family = Family::Trivial;
        s.p = p;
        grid.push_back(s);
    }
    for (long n = 1; n <= 3; ++n) {
        for (long p : {1, 3, 5}) {
            if (gcd_long(p, 8 * n) != 1) continue;
            s = GroupSpec{};
            s.family = Family::Q;
            s.n = n;
            s.p = p;
            grid.push_back(s);
        }
    }
    for (long p : {1, 5}) {
        s = GroupSpec{};
        s.family = Family::D;
        s.m = 2;
        s.n = 1;
        s.p = p;
        grid.push_back(s);
    }
    s = GroupSpec{};
    s.family = Family::P48;
    grid.push_back(s);
    s = GroupSpec{};
    s.family = Family::P120;
    grid.push_back(s);
    s = GroupSpec{};
    s.family = Family::Pprime;
    s.m = 2;  // the m = 1 representation is reported as not fixed point free
    grid.push_back(s);
    return grid;
}

int verify_groups(CheckSink& sink) {
    for (const auto& spec : default_verify_grid()) {
        ValidationReport rep = validate_group(spec);
        sink.check("groups " + spec.describe() + " (" + rep.mode + ")", rep.all_pass(),
                   rep.all_pass() ? "" : rep.summary());
    }
    return kOk;
}

int verify_f_identity(CheckSink& sink, long nmax) {
    bool all = true;
    std::string bad;
    for (long N = 1; N <= nmax && all; ++N) {
        for (long r = 1; r <= N; ++r) {
            RationalQ closed = F_closed(N, r);
            if (closed != F_bruteforce(N, r) || closed != series_oracle(N, r, 4)) {
                all = false;
                bad = "N=" + std::to_string(N) + " r=" + std::to_string(r);
                break;
            }
            RationalQ scaled = closed * 720;
            if (!is_integer(scaled) ||
                mod_floor(BigInt(scaled.get_num() - parity_poly(r)), BigInt(N)) != 0) {
                all = false;
                bad = "congruence N=" + std::to_string(N) + " r=" + std::to_string(r);
                break;
            }
        }
    }
    sink.check("F identity and congruence, N <= " + std::to_string(nmax), all, bad);
    return kOk;
}

int verify_laurent(CheckSink& sink, const std::vector<GroupSpec>& specs, long series_cap) {
    for (const auto& spec : specs) {
        try {
            LaurentCoefficients lc = ke_residual(spec, {series_cap});
            sink.check("laurent window " + spec.describe() +
                           " (order -8 = " + lc.at(-8).to_exact_string() + ")",
                       true);
        } catch (const Error& e) {
            sink.check("laurent window " + spec.describe(), false, e.what());
        }
    }
    return kOk;
}

int verify_parity(CheckSink& sink, Family fam, long nmax, const std::vector<long>& pset) {
    for (long n = 1; n <= nmax; ++n) {
        std::vector<long> ms = fam == Family::D ? std::vector<long>{2, 3, 4} : std::vector<long>{2};
        for (long m : ms) {
            GroupSpec spec;
            spec.family = fam;
            spec.n = n;
            spec.m = m;
            for (long p : pset) {
                spec.p = p;
                if (gcd_long(p, spec.base_order()) != 1 || p % 2 == 0) continue;
                ParityRecord parity = parity_certificate(spec);
                sink.check("parity " + spec.describe() + " 720C=" + parity.c720.get_str(),
                           parity.odd, "720C is even");
            }
        }
    }
    return kOk;
}

int verify_bounds(CheckSink& sink) {
    for (Family fam : {Family::P48, Family::P120, Family::Pprime}) {
        long base = GroupSpec{fam, 1, 1, 1, {}}.base_order();
        for (long p = 1; p <= 30; ++p) {
            if (gcd_long(p, base) != 1) continue;
            GroupSpec spec;
            spec.family = fam;
            spec.m = 1;
            spec.p = p;
            BoundRecord rec = c1_bound_check(spec);
            bool ok = rec.entry_bound_ok && rec.c1_within_bound &&
                      (!rec.antidiagonal_cancellation || *rec.antidiagonal_cancellation);
            sink.check("bounds " + spec.describe(), ok);
        }
        ThresholdInfo info = threshold(fam, true);
        long paper_strict = info.inclusive ? info.paper_value - 1 : info.paper_value;
        sink.check("threshold " + family_name(fam) + " rederived " +
                       std::to_string(info.rederived_strict) + " <= stated " +
                       std::to_string(info.paper_value),
                   info.rederived_strict <= paper_strict);
    }
    return kOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& selector, long nmax,
               const std::string& pset_csv, std::ostream& out) {
    CheckSink sink{out};
    std::vector<long> pset = parse_pset(pset_csv);
    if (selector == "groups" || selector == "all") verify_groups(sink);
    if (selector == "f-identity" || selector == "all")
        verify_f_identity(sink, nmax > 0 ? nmax : 60);
    if (selector == "laurent" || selector == "all") {
        std::vector<GroupSpec> specs;
        GroupSpec s;
        s.family = Family::Trivial;
        specs.push_back(s);
        s.p = 2;
        specs.push_back(s);
        s = GroupSpec{};
        s.family = family_from_name(cfg.family == "trivial" ? "Q" : cfg.family);
        s.n = cfg.n;
        s.m = cfg.m;
        s.p = cfg.p;
        specs.push_back(s);
        verify_laurent(sink, specs, cfg.series_cap);
    }
    if (selector == "parity" || selector == "all") {
        verify_parity(sink, Family::Q, nmax > 0 ? nmax : 3, pset);
        verify_parity(sink, Family::D, nmax > 0 ? std::min(nmax, 3L) : 2, pset);
    }
    if (selector == "bounds" || selector == "all") verify_bounds(sink);
    out << (sink.failures == 0 ? "all checks passed\n"
                               : std::to_string(sink.failures) + " checks failed\n");
    return sink.failures == 0 ? kOk : kMismatch;
}

int cmd_scan(const RunConfig& cfg, const std::string& families_csv, long nmax, long mmax,
             const std::string& pset_csv, bool scan_roots, std::ostream& out,
             std::ostream& err) {
    std::vector<long> pset = parse_pset(pset_csv);
    std::vector<Family> fams;
    {
        std::stringstream ss(families_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) fams.push_back(family_from_name(tok));
        }
    }
    if (fams.empty()) throw InvalidSpecError("empty family list");
    std::vector<GroupSpec> grid;
    for (Family fam : fams) {
        std::vector<std::pair<long, long>> nm;  // (n, m) combos
        switch (fam) {
            case Family::Trivial:
            case Family::P48:
            case Family::P120: nm = {{1, 2}}; break;
            case Family::Q:
                for (long n = 1; n <= nmax; ++n) nm.push_back({n, 2});
                break;
            case Family::D:
                for (long m = 2; m <= std::max(2L, mmax); ++m)
                    for (long n = 1; n <= nmax; ++n) nm.push_back({n, m});
                break;
            case Family::Pprime:
                for (long m = 1; m <= std::max(1L, mmax); ++m) nm.push_back({1, m});
                break;
        }
        for (auto [n, m] : nm) {
            for (long p : pset) {
                GroupSpec spec;
                spec.family = fam;
                spec.n = n;
                spec.m = m;
                spec.p = p;
                if (gcd_long(p, spec.base_order()) != 1) continue;  // not a valid catalog entry
                grid.push_back(spec);
            }
        }
    }
    std::ostringstream csv;
    csv << scan_csv_header();
    ReportFormat fmt{cfg.digits};
    long violations = 0;
    for (const auto& spec : grid) {
        std::vector<long> root_as{1};
        if (scan_roots) {
            root_as.clear();
            long order = spec.family == Family::Q      ? 4 * spec.n
                         : spec.family == Family::D    ? 2 * spec.n + 1
                         : spec.family == Family::P48  ? 8
                         : spec.family == Family::P120 ? 10
                                                       : 1;
            for (long a = 1; a <= std::max(1L, order - 1); ++a)
                if (gcd_long(a, order) == 1) root_as.push_back(a);
        }
        for (long a : root_as) {
            GroupSpec s = spec;
            s.roots.a = a;
            ObstructionReport rep = compute_c(s, {SumStrategy::Auto, cfg.element_cap});
            csv << scan_csv_row(rep, fmt);
            bool nontrivial = s.order() > 1;
            if (nontrivial && rep.verdict == Verdict::KE_possible) {
                ++violations;
                err << "unexpected KE_possible verdict for " << s.describe() << "\n";
            }
        }
    }
    emit(cfg, out, csv.str());
    return violations == 0 ? kOk : kMismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    if (const char* env = std::getenv("BQKE_DIGITS")) {
        try {
            cfg.digits = std::stol(env);
        } catch (...) {
            err << "invalid BQKE_DIGITS value\n";
            return kUsage;
        }
    }

    CLI::App app{"exact Kaehler-Einstein obstruction computations for 2-ball quotient groups"};
    app.require_subcommand(1);
    app.fallthrough(false);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--family", cfg.family, "trivial|Q|D|P48|P120|Pprime");
        sub->add_option("--n", cfg.n, "Q/D parameter n");
        sub->add_option("--m", cfg.m, "D/Pprime parameter m");
        sub->add_option("--p", cfg.p, "cyclic cofactor order");
        sub->add_option("--mode", cfg.mode)->check(CLI::IsMember({"exact", "float"}));
        sub->add_option("--digits", cfg.digits)->check(CLI::Range(15L, 200L));
        sub->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--out", cfg.out_path, "write output to this path");
        sub->add_option("--element-cap", cfg.element_cap);
        sub->add_option("--series-cap", cfg.series_cap);
        sub->add_option("--root-a", cfg.root_a, "Galois index for the root a");
        sub->add_option("--root-u", cfg.root_u, "Galois index for the root u");
        sub->add_option("--data-dir", cfg.data_dir, "directory with the reference tables");
    };

    CLI::App* compute = app.add_subcommand("compute", "obstruction report for one group");
    add_common(compute);

    CLI::App* table = app.add_subcommand("table", "recompute a reference table and compare");
    std::string table_selector;
    table->add_option("selector", table_selector, "p48|p120|pprime")->required();
    add_common(table);

    CLI::App* verify = app.add_subcommand("verify", "run an invariant suite");
    std::string verify_selector;
    long nmax = 0;
    std::string pset_csv = "3,5,7";
    verify->add_option("selector", verify_selector, "groups|f-identity|laurent|parity|bounds|all")
        ->required()
        ->check(CLI::IsMember({"groups", "f-identity", "laurent", "parity", "bounds", "all"}));
    verify->add_option("--nmax", nmax, "largest n (or N for f-identity)");
    verify->add_option("--pset", pset_csv, "comma separated cofactor orders");
    add_common(verify);

    CLI::App* scan = app.add_subcommand("scan", "verdicts over a parameter grid");
    std::string families_csv = "trivial,Q,D,P48,P120,Pprime";
    std::string scan_pset = "1,3,5,7";
    long scan_nmax = 3, scan_mmax = 3;
    bool scan_roots = false;
    scan->add_option("--families", families_csv, "comma separated family list");
    scan->add_option("--nmax", scan_nmax);
    scan->add_option("--mmax", scan_mmax);
    scan->add_option("--pset", scan_pset, "comma separated cofactor orders");
    scan->add_flag("--scan-roots", scan_roots, "emit one row per Galois root choice");
    add_common(scan);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsage;
    }

    try {
        if (compute->parsed()) return cmd_compute(cfg, out);
        if (table->parsed()) return cmd_table(cfg, table_selector, out, err);
        if (verify->parsed()) return cmd_verify(cfg, verify_selector, nmax, pset_csv, out);
        if (scan->parsed())
            return cmd_scan(cfg, families_csv, scan_nmax, scan_mmax, scan_pset, scan_roots, out,
                            err);
        err << "no subcommand\n";
        return kUsage;
    } catch (const CheckFailError& e) {
        err << "check failed: " << e.what() << "\n";
        return kMismatch;
    } catch (const InvalidSpecError& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace bqke::cli
