#include "bqke/report.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace bqke {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out.push_back(c);
    }
    out += "\"";
    return out;
}

ordered_json params_json(const GroupSpec& spec) {
    ordered_json p = ordered_json::object();
    switch (spec.family) {
        case Family::Q: p["n"] = spec.n; break;
        case Family::D:
            p["m"] = spec.m;
            p["n"] = spec.n;
            break;
        case Family::Pprime: p["m"] = spec.m; break;
        default: break;
    }
    p["p"] = spec.p;
    return p;
}

}  // namespace

std::string format_embedded(const Cyclo& value, long digits) {
    return value.embed(std::max(digits, 15L)).re.to_string(digits);
}

std::string format_embedded_im(const Cyclo& value, long digits) {
    return value.embed(std::max(digits, 15L)).im.to_string(digits);
}

std::string report_to_json(const ObstructionReport& rep, const ReportFormat& fmt) {
    ordered_json j;
    j["family"] = family_name(rep.spec.family);
    j["params"] = params_json(rep.spec);
    j["group_order"] = rep.group_order;
    j["phi0"] = rep.phi0.to_exact_string();
    j["c_exact"] = rep.c_exact.to_exact_string();
    j["c_float_re"] = format_embedded(rep.c_exact, fmt.digits);
    j["c_float_im"] = format_embedded_im(rep.c_exact, fmt.digits);
    j["c1"] = rep.c1.to_exact_string();
    j["c2"] = rep.c2.to_exact_string();
    if (rep.parity) {
        j["parity_720c"] = rep.parity->c720.get_str();
        j["parity_odd"] = rep.parity->odd;
    } else {
        j["parity_720c"] = nullptr;
        j["parity_odd"] = nullptr;
    }
    j["verdict"] = verdict_name(rep.verdict);
    j["paper_hypothesis_met"] = rep.paper_hypothesis_met;
    return j.dump(2) + "\n";
}

std::string report_to_csv(const ObstructionReport& rep, const ReportFormat& fmt) {
    std::ostringstream os;
    os << "family,n,m,p,group_order,phi0,c_exact,c_float_re,c_float_im,c1,c2,parity_720c,"
          "parity_odd,verdict,paper_hypothesis_met\n";
    os << family_name(rep.spec.family) << ",";
    os << (rep.spec.family == Family::Q || rep.spec.family == Family::D ? std::to_string(rep.spec.n)
                                                                        : "")
       << ",";
    os << (rep.spec.family == Family::D || rep.spec.family == Family::Pprime
               ? std::to_string(rep.spec.m)
               : "")
       << ",";
    os << rep.spec.p << "," << rep.group_order << ",";
    os << csv_quote(rep.phi0.to_exact_string()) << ",";
    os << csv_quote(rep.c_exact.to_exact_string()) << ",";
    os << format_embedded(rep.c_exact, fmt.digits) << "," << format_embedded_im(rep.c_exact, fmt.digits)
       << ",";
    os << csv_quote(rep.c1.to_exact_string()) << "," << csv_quote(rep.c2.to_exact_string()) << ",";
    os << (rep.parity ? rep.parity->c720.get_str() : "") << ",";
    os << (rep.parity ? (rep.parity->odd ? "true" : "false") : "") << ",";
    os << verdict_name(rep.verdict) << "," << (rep.paper_hypothesis_met ? "true" : "false")
       << "\n";
    return os.str();
}

std::string report_to_text(const ObstructionReport& rep, const ReportFormat& fmt) {
    std::ostringstream os;
    os << "group        " << rep.spec.describe() << "\n";
    os << "order        " << rep.group_order << "\n";
    os << "phi(0,0)     " << rep.phi0.to_exact_string() << "\n";
    os << "C exact      " << rep.c_exact.to_exact_string() << "\n";
    os << "C float      " << format_embedded(rep.c_exact, fmt.digits) << "\n";
    os << "C1           " << rep.c1.to_exact_string() << "\n";
    os << "C2           " << rep.c2.to_exact_string() << "\n";
    if (rep.parity) {
        os << "720*C        " << rep.parity->c720.get_str() << " ("
           << (rep.parity->odd ? "odd" : "even") << ", residue " << rep.parity->residue << " mod "
           << rep.parity->modulus << ")\n";
    }
    os << "verdict      " << verdict_name(rep.verdict) << "\n";
    os << "hypotheses   " << (rep.paper_hypothesis_met ? "met" : "outside stated range") << "\n";
    return os.str();
}

std::string scan_csv_header() { return "family,n,m,p,order,phi0,c_exact,c_float,verdict\n"; }

std::string scan_csv_row(const ObstructionReport& rep, const ReportFormat& fmt) {
    std::ostringstream os;
    os << family_name(rep.spec.family) << ",";
    os << (rep.spec.family == Family::Q || rep.spec.family == Family::D ? std::to_string(rep.spec.n)
                                                                        : "")
       << ",";
    os << (rep.spec.family == Family::D || rep.spec.family == Family::Pprime
               ? std::to_string(rep.spec.m)
               : "")
       << ",";
    os << rep.spec.p << "," << rep.group_order << ",";
    os << csv_quote(rep.phi0.to_exact_string()) << ",";
    os << csv_quote(rep.c_exact.to_exact_string()) << ",";
    os << format_embedded(rep.c_exact, fmt.digits) << "," << verdict_name(rep.verdict) << "\n";
    return os.str();
}

}  // namespace bqke
