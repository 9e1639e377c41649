#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pcp/abssep.hpp"
#include "pcp/cldui.hpp"
#include "pcp/construct.hpp"
#include "pcp/io.hpp"

namespace pcpkit {

namespace {

using pcp::io::Json;

struct Options {
    std::string pair_path;
    std::string cert_path;
    std::string out_path;
    std::string method = "auto";
    bool perms = false;
    bool json = false;
    bool dense_crosscheck = false;
    bool normalize = false;
    bool certify = false;
    double tol = pcp::kCertificateTolerance;
    int n = 0;
    std::string lambdas;
    std::uint64_t seed = 0;
    int samples = 0;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PCPKIT_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used, 0);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw pcp::Error(pcp::ErrorKind::Parse, std::string("PCPKIT_SEED is not an integer: ") + env);
    }
    return pcp::kDefaultOrderingSeed;
}

std::string label(const pcp::io::PairDocument& doc, const std::string& path) {
    return doc.name.empty() ? path : doc.name;
}

Json witness_json(const std::optional<pcp::EntryWitness>& w) {
    if (!w) return nullptr;
    if (w->row < 0) return Json{{"min_eigenvalue", w->value}};
    return Json{{"row", w->row + 1}, {"col", w->col + 1}, {"value", w->value}};
}

std::string witness_text(const std::optional<pcp::EntryWitness>& w) {
    if (!w) return "";
    std::ostringstream os;
    if (w->row < 0)
        os << " (smallest eigenvalue " << w->value << ")";
    else
        os << " at (" << w->row + 1 << ", " << w->col + 1 << "), value " << w->value;
    return os.str();
}

Json report_json(const pcp::NecessaryReport& r) {
    Json conditions = Json::array();
    for (int c = 0; c < 5; ++c) {
        Json item{{"condition", std::string(pcp::condition_label(static_cast<pcp::Condition>(c)))},
                  {"holds", r.holds[static_cast<std::size_t>(c)]}};
        if (c < 4) item["witness"] = witness_json(r.witness[static_cast<std::size_t>(c)]);
        conditions.push_back(std::move(item));
    }
    return Json{{"conditions", conditions},
                {"coherence_x", r.coherence_x},
                {"coherence_y", r.coherence_y},
                {"all_hold", r.holds_all()}};
}

void print_report(std::ostream& out, const pcp::NecessaryReport& r) {
    for (int c = 0; c < 5; ++c) {
        const auto i = static_cast<std::size_t>(c);
        out << "  " << pcp::condition_label(static_cast<pcp::Condition>(c)) << ": "
            << (r.holds[i] ? "holds" : "FAILS");
        if (c < 4 && !r.holds[i]) out << witness_text(r.witness[i]);
        if (c == 4) out << " (" << r.coherence_x << " vs " << r.coherence_y << ")";
        out << '\n';
    }
}

Json residual_json(const pcp::ReconstructionResidual& r) {
    return Json{{"x_error", r.x_error}, {"y_error", r.y_error}, {"scale", r.scale}};
}

void print_outcome(std::ostream& out, const pcp::ConstructorOutcome& o) {
    out << "method: " << o.method << '\n' << "status: " << pcp::to_string(o.status) << '\n';
    if (!o.reason.empty()) out << "reason: " << o.reason << '\n';
    if (o.stuck_at) {
        const auto& w = *o.stuck_at;
        out << "stuck at v_{" << w.term + 1 << "," << w.entry + 1 << "}: "
            << (w.zero_denominator ? "zero denominator" : "radicand " + std::to_string(w.radicand)) << '\n';
    }
    for (const auto& a : o.attempts) out << "  tried " << a << '\n';
}

Json outcome_json(const pcp::ConstructorOutcome& o) {
    Json j{{"method", o.method}, {"status", std::string(pcp::to_string(o.status))}, {"reason", o.reason},
           {"attempts", o.attempts}};
    if (o.stuck_at)
        j["stuck_at"] = Json{{"term", o.stuck_at->term + 1},
                             {"entry", o.stuck_at->entry + 1},
                             {"radicand", o.stuck_at->radicand},
                             {"zero_denominator", o.stuck_at->zero_denominator}};
    if (o.decomposition)
        j["certificate"] = pcp::io::certificate_to_json(*o.decomposition, o.method, o.permutation);
    return j;
}

int exit_for(const pcp::ConstructorOutcome& o) {
    switch (o.status) {
    case pcp::ConstructorStatus::Decomposed: return kExitOk;
    case pcp::ConstructorStatus::NotApplicable: return kExitNotApplicable;
    case pcp::ConstructorStatus::ConditionsViolated: return kExitFail;
    }
    return kExitFail;
}

int cmd_check_pair(const Options& opt, std::ostream& out) {
    const auto doc = pcp::io::pair_from_json(pcp::io::load_json_file(opt.pair_path));
    const auto report = pcp::check_necessary(doc.pair);
    if (opt.json) {
        Json j = report_json(report);
        j["pair"] = label(doc, opt.pair_path);
        j["n"] = doc.pair.n();
        if (report.holds_through(pcp::Condition::SameDiagonal)) j["length_lower_bound"] = pcp::length_lower_bound(doc.pair);
        out << j.dump(2) << '\n';
    } else {
        out << "pair: " << label(doc, opt.pair_path) << " (n = " << doc.pair.n() << ")\n";
        print_report(out, report);
        if (report.holds_through(pcp::Condition::SameDiagonal))
            out << "length lower bound (rank X): " << pcp::length_lower_bound(doc.pair) << '\n';
        out << "verdict: " << (report.holds_all() ? "all necessary conditions hold" : "not PCP") << '\n';
    }
    return report.holds_all() ? kExitOk : kExitFail;
}

int cmd_decompose(const Options& opt, std::ostream& out) {
    const auto doc = pcp::io::pair_from_json(pcp::io::load_json_file(opt.pair_path));
    pcp::ConstructorOutcome o;
    if (opt.method == "auto")
        o = pcp::decompose_auto(doc.pair);
    else if (opt.method == "diag")
        o = pcp::decompose_diagonal_x(doc.pair);
    else if (opt.method == "2x2")
        o = pcp::decompose_2x2(doc.pair);
    else if (opt.method == "recursive")
        o = pcp::decompose_recursive(doc.pair, opt.perms);
    else
        o = pcp::decompose_comparison(doc.pair);

    std::optional<pcp::ReconstructionResidual> residual;
    if (o.decomposition) residual = pcp::reconstruction_residual(*o.decomposition, doc.pair);
    if (o.decomposed() && !opt.out_path.empty())
        pcp::io::write_json_file(opt.out_path,
                                 pcp::io::certificate_to_json(*o.decomposition, o.method, o.permutation));

    if (opt.json) {
        Json j = outcome_json(o);
        if (residual) j["residual"] = residual_json(*residual);
        out << j.dump(2) << '\n';
    } else {
        print_outcome(out, o);
        if (o.decomposed()) {
            out << "terms: " << o.decomposition->terms() << '\n';
            out << "permutation:";
            for (int p : o.permutation) out << ' ' << p + 1;
            out << '\n';
            out << "residual: X " << residual->x_error << ", Y " << residual->y_error << " (scale " << residual->scale
                << ")\n";
            if (!opt.out_path.empty()) out << "certificate: " << opt.out_path << '\n';
        }
    }
    return exit_for(o);
}

int cmd_verify(const Options& opt, std::ostream& out) {
    const auto doc = pcp::io::pair_from_json(pcp::io::load_json_file(opt.pair_path));
    const auto cert = pcp::io::certificate_from_json(pcp::io::load_json_file(opt.cert_path));
    if (cert.decomposition.n() != doc.pair.n())
        throw pcp::Error(pcp::ErrorKind::DimensionMismatch, "certificate has n = " +
                                                                std::to_string(cert.decomposition.n()) +
                                                                " but the pair has n = " + std::to_string(doc.pair.n()));
    const auto r = pcp::reconstruction_residual(cert.decomposition, doc.pair);
    const bool ok = pcp::verify_decomposition(cert.decomposition, doc.pair, opt.tol);
    if (opt.json) {
        out << Json{{"verified", ok}, {"terms", cert.decomposition.terms()}, {"residual", residual_json(r)},
                    {"tolerance", opt.tol}}
                   .dump(2)
            << '\n';
    } else {
        out << "terms: " << cert.decomposition.terms() << '\n'
            << "residual: X " << r.x_error << ", Y " << r.y_error << " (scale " << r.scale << ")\n"
            << "verdict: " << (ok ? "verified" : "NOT verified") << " at tolerance " << opt.tol << '\n';
    }
    return ok ? kExitOk : kExitFail;
}

int cmd_check_state(const Options& opt, std::ostream& out) {
    const auto state = pcp::io::state_from_json(pcp::io::load_json_file(opt.pair_path));
    Json j;
    std::ostringstream text;

    pcp::PairXY pair;
    std::optional<bool> invariant;
    if (const auto* dense = std::get_if<pcp::io::DenseStateDocument>(&state)) {
        try {
            pair = pcp::extract_pair(dense->rho, dense->n);
        } catch (const pcp::Error& e) {
            if (e.kind() != pcp::ErrorKind::NotCLDUI) throw;
            if (opt.json)
                out << Json{{"cldui", false}, {"error", e.what()}}.dump(2) << '\n';
            else
                out << "not a CLDUI matrix: " << e.what() << '\n';
            return kExitFail;
        }
        invariant = pcp::is_diagonal_unitary_invariant(dense->rho, dense->n, opt.samples, opt.seed);
    } else {
        pair = std::get<pcp::io::PairDocument>(state).pair;
    }

    if (opt.normalize) {
        const double trace = pcp::entrywise_one_norm(pair.y());
        if (trace > 0.0) pair = pcp::PairXY(pair.x() / trace, pair.y() / trace);
    }

    const auto report = pcp::check_necessary(pair);
    const bool is_state = report.holds_through(pcp::Condition::SameDiagonal);
    j["n"] = pair.n();
    j["psd"] = is_state;
    j["trace"] = pcp::entrywise_one_norm(pair.y());
    if (invariant) j["diagonal_unitary_invariant"] = *invariant;
    text << "n = " << pair.n() << '\n';
    if (invariant) text << "diagonal unitary invariance (" << opt.samples << " samples): " << (*invariant ? "yes" : "NO") << '\n';
    text << "PSD (conditions (a)-(c)): " << (is_state ? "yes" : "NO") << '\n';
    text << "trace: " << pcp::entrywise_one_norm(pair.y()) << '\n';

    if (!is_state) {
        print_report(text, report);
        text << "verdict: not a PSD CLDUI operator\n";
        j["conditions"] = report_json(report);
        j["verdict"] = "not a state";
        out << (opt.json ? j.dump(2) + "\n" : text.str());
        return kExitFail;
    }

    const auto verdict = pcp::separability_verdict(pair);
    j["ppt"] = verdict.ppt;
    j["realignment"] = Json{{"lhs", verdict.realignment.lhs},
                            {"rhs", verdict.realignment.rhs},
                            {"passes", verdict.realignment.passes}};
    j["length_lower_bound"] = pcp::length_lower_bound(pair);
    text << "PPT: " << (verdict.ppt ? "yes" : "NO") << '\n'
         << "realignment: ||X||_1 - ||X||_tr = " << verdict.realignment.lhs
         << ", ||Y||_1 - ||Y||_tr = " << verdict.realignment.rhs << " -> "
         << (verdict.realignment.passes ? "passes" : "FAILS") << '\n'
         << "length lower bound (rank X): " << pcp::length_lower_bound(pair) << '\n';

    if (opt.dense_crosscheck) {
        const pcp::ComplexMatrix rho = pcp::dense_state(pair);
        const bool dense_psd = pcp::is_psd(rho);
        const bool dense_ppt = pcp::is_psd(pcp::partial_transpose(rho, pair.n()));
        const double realigned = pcp::trace_norm(pcp::realign_map(rho, pair.n()));
        const double trace = rho.trace().real();
        const bool dense_realign = realigned <= trace + 1e-8 * std::max(1.0, trace);
        const bool agrees = dense_psd && dense_ppt == verdict.ppt && dense_realign == verdict.realignment.passes;
        j["dense_crosscheck"] = Json{{"psd", dense_psd},
                                     {"ppt", dense_ppt},
                                     {"realigned_trace_norm", realigned},
                                     {"trace", trace},
                                     {"agrees", agrees}};
        text << "dense cross-check: PSD " << (dense_psd ? "yes" : "NO") << ", PPT " << (dense_ppt ? "yes" : "NO")
             << ", ||R(rho)||_tr = " << realigned << " vs tr = " << trace << " -> "
             << (agrees ? "agrees" : "DISAGREES") << '\n';
    }

    j["verdict"] = std::string(pcp::to_string(verdict.kind));
    text << "verdict: " << pcp::to_string(verdict.kind);
    int code = kExitInconclusive;
    switch (verdict.kind) {
    case pcp::Separability::Entangled:
        text << " (" << verdict.criterion << " violated)\n";
        j["criterion"] = verdict.criterion;
        code = kExitFail;
        break;
    case pcp::Separability::Separable: {
        const auto& cert = *verdict.certificate;
        text << " (certificate via " << cert.method << ", " << cert.decomposition->terms() << " terms)\n";
        const Json cj = pcp::io::certificate_to_json(*cert.decomposition, cert.method, cert.permutation);
        if (!opt.out_path.empty()) {
            pcp::io::write_json_file(opt.out_path, cj);
            text << "certificate: " << opt.out_path << '\n';
            j["certificate_path"] = opt.out_path;
        }
        j["certificate"] = cj;
        code = kExitOk;
        break;
    }
    case pcp::Separability::Inconclusive:
        text << '\n';
        for (const auto& a : verdict.attempts) text << "  tried " << a << '\n';
        j["attempts"] = verdict.attempts;
        break;
    }
    out << (opt.json ? j.dump(2) + "\n" : text.str());
    return code;
}

int cmd_abs_ppt(const Options& opt, std::ostream& out) {
    const std::vector<double> lambdas = pcp::normalized_spectrum(pcp::io::parse_lambdas(opt.lambdas));
    if (lambdas.size() != static_cast<std::size_t>(opt.n * opt.n))
        throw pcp::Error(pcp::ErrorKind::LengthMismatch, "n = " + std::to_string(opt.n) + " needs " +
                                                             std::to_string(opt.n * opt.n) + " eigenvalues, got " +
                                                             std::to_string(lambdas.size()));
    const auto orderings = pcp::enumerate_orderings(opt.n, opt.samples, opt.seed);
    const auto result = pcp::abs_ppt_check(orderings, lambdas);

    Json j{{"n", opt.n}, {"orderings", Json::array()}, {"passes", result.passes}};
    std::ostringstream text;
    text << "n = " << opt.n << ", " << orderings.size() << " orderings (seed " << opt.seed << ", " << opt.samples
         << " samples)\n";
    if (!opt.out_path.empty()) std::filesystem::create_directories(opt.out_path);

    bool certified = true;
    for (std::size_t k = 0; k < orderings.size(); ++k) {
        std::string order;
        for (const auto& s : orderings[k].slots) order += (order.empty() ? "" : " > ") + pcp::to_string(s);
        const double min_ev = result.min_eigenvalues[k];
        Json item{{"index", k + 1}, {"ordering", order}, {"min_eigenvalue", min_ev}};
        text << "  L" << k + 1 << ": " << order << "\n      min eigenvalue " << min_ev << '\n';
        if (opt.certify) {
            const auto o = pcp::certify_special_separable(orderings[k], lambdas);
            item["status"] = std::string(pcp::to_string(o.status));
            text << "      certificate: " << pcp::to_string(o.status);
            if (o.decomposed()) {
                const Json cj = pcp::io::certificate_to_json(*o.decomposition, o.method, o.permutation);
                if (!opt.out_path.empty()) {
                    const std::string path =
                        (std::filesystem::path(opt.out_path) / ("ordering_" + std::to_string(k + 1) + ".json")).string();
                    pcp::io::write_json_file(path, cj);
                    item["certificate_path"] = path;
                    text << " -> " << path;
                }
                item["certificate"] = cj;
            } else {
                item["reason"] = o.reason;
                text << " (" << o.reason << ")";
                if (result.passes) certified = false;
            }
            text << '\n';
        }
        j["orderings"].push_back(std::move(item));
    }
    if (result.failing_ordering) {
        j["failing_ordering"] = *result.failing_ordering + 1;
        text << "verdict: NOT absolutely PPT (ordering L" << *result.failing_ordering + 1 << " fails)\n";
    } else {
        text << "verdict: absolutely PPT\n";
    }
    out << (opt.json ? j.dump(2) + "\n" : text.str());
    return result.passes && certified ? kExitOk : kExitFail;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pairwise completely positive matrices and CLDUI separability", "pcpkit"};
    app.require_subcommand(1);
    Options opt;
    int default_samples_twirl = 16;

    auto* check_pair = app.add_subcommand("check-pair", "Evaluate the five necessary PCP conditions");
    check_pair->add_option("pair", opt.pair_path, "Pair JSON file")->required();
    check_pair->add_flag("--json", opt.json, "JSON report");

    auto* decompose = app.add_subcommand("decompose", "Construct a PCP decomposition");
    decompose->add_option("pair", opt.pair_path, "Pair JSON file")->required();
    decompose->add_option("--method", opt.method, "Constructor")
        ->check(CLI::IsMember({"auto", "diag", "2x2", "recursive", "comparison"}));
    decompose->add_flag("--perms", opt.perms, "Let the recursive constructor try index permutations");
    decompose->add_option("--out", opt.out_path, "Write the certificate here");
    decompose->add_flag("--json", opt.json, "JSON report");

    auto* verify = app.add_subcommand("verify", "Check a certificate against a pair");
    verify->add_option("pair", opt.pair_path, "Pair JSON file")->required();
    verify->add_option("certificate", opt.cert_path, "Certificate JSON file")->required();
    verify->add_option("--tol", opt.tol, "Relative Frobenius tolerance");
    verify->add_flag("--json", opt.json, "JSON report");

    auto* check_state = app.add_subcommand("check-state", "Separability analysis of a CLDUI state");
    check_state->add_option("state", opt.pair_path, "Pair JSON or dense {\"n\", \"rho\"} JSON")->required();
    check_state->add_flag("--dense-crosscheck", opt.dense_crosscheck, "Recompute criteria on the dense matrix");
    check_state->add_flag("--normalize", opt.normalize, "Scale to unit trace first");
    check_state->add_option("--out", opt.out_path, "Write the separability certificate here");
    check_state->add_option("--seed", opt.seed, "Seed for the invariance test");
    check_state->add_option("--samples", default_samples_twirl, "Random diagonal unitaries for dense input");
    check_state->add_flag("--json", opt.json, "JSON report");

    int ordering_samples = pcp::kDefaultOrderingSamples;
    auto* abs_ppt = app.add_subcommand("abs-ppt", "Absolute PPT test of a spectrum");
    abs_ppt->add_option("--n", opt.n, "Local dimension")->required()->check(CLI::Range(2, 5));
    abs_ppt->add_option("--lambdas", opt.lambdas, "Eigenvalues: file or comma separated list")->required();
    abs_ppt->add_flag("--certify", opt.certify, "Certify separability of each special state");
    abs_ppt->add_option("--out", opt.out_path, "Directory for certificate files");
    abs_ppt->add_option("--seed", opt.seed, "Seed for ordering enumeration");
    abs_ppt->add_option("--samples", ordering_samples, "Samples for ordering enumeration")
        ->check(CLI::PositiveNumber);
    abs_ppt->add_flag("--json", opt.json, "JSON report");

    try {
        opt.seed = default_seed();
    } catch (const pcp::Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitIo;
    }

    try {
        if (check_pair->parsed()) return cmd_check_pair(opt, out);
        if (decompose->parsed()) return cmd_decompose(opt, out);
        if (verify->parsed()) return cmd_verify(opt, out);
        if (check_state->parsed()) {
            opt.samples = default_samples_twirl;
            return cmd_check_state(opt, out);
        }
        if (abs_ppt->parsed()) {
            opt.samples = ordering_samples;
            return cmd_abs_ppt(opt, out);
        }
    } catch (const pcp::Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitIo;
}

} // namespace pcpkit
