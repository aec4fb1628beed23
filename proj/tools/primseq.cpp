// primseq: primitive-sequence toolkit.
//
//   seq       closed-form primitive sequences for the distribution zoo
//   convert   moment <-> primitive conversions
//   check     admissibility diagnostics and LP certification
//   bound     sharp CDF / moment bounds with certificates
//   envelope  bound sweep over orders, emitted as plot data
//
// All numeric output is exact "p/q" unless --decimal is given. Exit codes:
// 0 success, 1 domain errors (inadmissible input, infeasible prefix,
// malformed content), 2 usage errors.

#include <primseq/bounds.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace primseq;

std::string render(const Rational& v, bool decimal) {
    return decimal ? format_decimal(v, 12) : format_rational(v);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open input file: " + path);
    return in;
}

struct SeqArgs {
    std::string dist;
    std::size_t order = 0;
    std::string out;
    bool decimal = false;
};

int run_seq(const SeqArgs& args) {
    Distribution d = parse_dist_spec(args.dist);
    PrimitiveSeq ps = primitive_sequence(d, args.order);
    std::ostringstream os;
    os << "interval " << format_rational(ps.interval().a) << ' '
       << format_rational(ps.interval().b) << '\n';
    for (std::size_t n = 0; n <= ps.order(); ++n)
        os << n << ' ' << render(ps.eps(n), args.decimal) << '\n';
    if (args.out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(args.out, std::ios::binary);
        if (!f) throw DomainError("cannot open output file: " + args.out);
        f << os.str();
        if (!f.good()) throw DomainError("write failure: " + args.out);
    }
    return 0;
}

struct ConvertArgs {
    std::string direction;
    std::string b_text;
    std::string a_text = "0";
    std::string in;
    bool decimal = false;
};

int run_convert(const ConvertArgs& args) {
    Rational b = parse_rational(args.b_text);
    Rational a = parse_rational(args.a_text);
    std::ifstream in = open_input(args.in);
    if (args.direction == "m2p") {
        MomentVector mv = read_moments(in, b);
        PrimitiveSeq ps = primitive_from_moments(mv, a);
        std::cout << "interval " << format_rational(ps.interval().a) << ' '
                  << format_rational(ps.interval().b) << '\n';
        for (std::size_t n = 0; n <= ps.order(); ++n)
            std::cout << n << ' ' << render(ps.eps(n), args.decimal) << '\n';
    } else {
        PrimitiveSeq ps = read_sequence(in);
        if (ps.interval().b != b)
            throw DomainError("--b disagrees with the sequence file interval");
        MomentVector mv = moments_from_primitive(ps);
        for (std::size_t n = 0; n <= mv.order(); ++n)
            std::cout << n << ' ' << render(mv.moments[n], args.decimal) << '\n';
    }
    return 0;
}

struct CheckArgs {
    std::string seq;
    bool certify = false;
    std::size_t grid = 0;  // 0: default 4m+1
};

int run_check(const CheckArgs& args) {
    std::ifstream in = open_input(args.seq);
    PrimitiveSeq ps = read_sequence(in);
    bool bad = false;

    ElementaryReport er = check_elementary(ps);
    std::cout << format_report(er);
    bad = bad || !er.ok();

    NormalizedSeq g = gamma_unchecked(ps);
    auto cm = check_cm_prefix(g);
    std::cout << format_report(cm);
    bad = bad || !cm.empty();

    if (ps.order() >= 1) {
        HankelReport hr = hankel_check(g);
        std::cout << format_report(hr);
        bad = bad || !hr.ok();
    }

    if (args.certify) {
        std::size_t grid = args.grid ? args.grid : 4 * ps.order() + 1;
        AdmissibilityReport ar = certify_truncated(ps, grid);
        std::cout << format_report(ar);
        bad = bad || ar.verdict == Verdict::Rejected;
    }
    return bad ? 1 : 0;
}

struct BoundArgs {
    std::string dist;
    std::string seq;
    std::size_t order = 0;
    std::string x0_text;
    long k = -1;
    std::string side = "upper";
    std::string tol_text = "1/1000000000";
    bool decimal = false;
};

int run_bound(const BoundArgs& args) {
    PrimitiveSeq ps = [&] {
        if (!args.dist.empty())
            return primitive_sequence(parse_dist_spec(args.dist), args.order);
        std::ifstream in = open_input(args.seq);
        PrimitiveSeq file_seq = read_sequence(in);
        if (file_seq.order() < args.order)
            throw DomainError("sequence file holds fewer terms than --order");
        return file_seq.truncated(args.order);
    }();
    ConstraintPrefix prefix = ConstraintPrefix::from(ps);
    Side side = args.side == "upper" ? Side::Upper : Side::Lower;
    Rational tol = parse_rational(args.tol_text);

    BoundResult res = [&] {
        if (!args.x0_text.empty())
            return cdf_bound(prefix, parse_rational(args.x0_text), side, tol);
        return moment_bound(prefix, static_cast<std::size_t>(args.k), side, tol);
    }();

    const Rational& outer = side == Side::Upper ? res.hi : res.lo;
    std::cout << "bound " << render(outer, args.decimal) << '\n';
    std::cout << "enclosure " << render(res.lo, args.decimal) << ' '
              << render(res.hi, args.decimal) << '\n';
    std::cout << "shift " << format_rational(res.shift) << '\n';
    std::cout << "certificate";
    for (std::size_t j = 0; j <= prefix.order(); ++j)
        std::cout << ' ' << format_rational(res.certificate.coefficient(j));
    std::cout << '\n';
    FiniteAtomic extremizer = recover_extremizer(res);
    std::cout << "extremizer";
    for (std::size_t i = 0; i < extremizer.points.size(); ++i)
        std::cout << ' ' << format_rational(extremizer.points[i]) << ':'
                  << format_rational(extremizer.weights[i]);
    std::cout << '\n';
    std::cout << "iterations " << res.iterations << '\n';
    return 0;
}

struct EnvelopeArgs {
    std::string dist;
    std::string x0_text;
    std::size_t mmax = 0;
    std::string out_upper;
    std::string out_lower;
    std::string tol_text = "1/1000000000";
    bool max_override = false;
};

int run_envelope(const EnvelopeArgs& args) {
    if (args.mmax > 30 && !args.max_override)
        throw DomainError(
            "envelope: orders beyond 30 grow large exact representations; pass "
            "--max-override to proceed");
    Distribution d = parse_dist_spec(args.dist);
    Rational x0 = parse_rational(args.x0_text);
    Rational tol = parse_rational(args.tol_text);
    std::vector<EnvelopePoint> points = envelope_sweep(d, x0, args.mmax, tol);
    emit_envelope_files(points, args.out_upper, args.out_lower);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"primitive-sequence toolkit"};
    app.require_subcommand(1);

    SeqArgs seq_args;
    CLI::App* seq = app.add_subcommand("seq", "closed-form primitive sequence");
    seq->add_option("--dist", seq_args.dist, "distribution spec")->required();
    seq->add_option("--order", seq_args.order, "highest term m")->required();
    seq->add_option("--out", seq_args.out, "write a sequence file instead of stdout");
    seq->add_flag("--decimal", seq_args.decimal, "decimal rendering");

    ConvertArgs conv_args;
    CLI::App* conv = app.add_subcommand("convert", "moment <-> primitive conversion");
    conv->add_option("--direction", conv_args.direction, "m2p or p2m")
        ->required()
        ->check(CLI::IsMember({"m2p", "p2m"}));
    conv->add_option("--b", conv_args.b_text, "upper endpoint b")->required();
    conv->add_option("--a", conv_args.a_text, "lower endpoint a (default 0)");
    conv->add_option("--in", conv_args.in, "input file")->required();
    conv->add_flag("--decimal", conv_args.decimal, "decimal rendering");

    CheckArgs check_args;
    CLI::App* check = app.add_subcommand("check", "admissibility diagnostics");
    check->add_option("--seq", check_args.seq, "sequence file")->required();
    check->add_flag("--certify", check_args.certify, "run LP certification");
    check->add_option("--grid", check_args.grid, "certification grid size");

    BoundArgs bound_args;
    CLI::App* bound = app.add_subcommand("bound", "sharp CDF / moment bound");
    auto* bdist = bound->add_option("--dist", bound_args.dist, "distribution spec");
    auto* bseq = bound->add_option("--seq", bound_args.seq, "sequence file");
    bdist->excludes(bseq);
    bound->add_option("--order", bound_args.order, "constraint order m")->required();
    auto* bx0 = bound->add_option("--x0", bound_args.x0_text, "CDF query point");
    auto* bk = bound->add_option("--k", bound_args.k, "moment order");
    bx0->excludes(bk);
    bound->add_option("--side", bound_args.side, "upper or lower")
        ->required()
        ->check(CLI::IsMember({"upper", "lower"}));
    bound->add_option("--tol", bound_args.tol_text, "enclosure tolerance");
    bound->add_flag("--decimal", bound_args.decimal, "decimal rendering");

    EnvelopeArgs env_args;
    CLI::App* env = app.add_subcommand("envelope", "bound sweep plot data");
    env->add_option("--dist", env_args.dist, "distribution spec")->required();
    env->add_option("--x0", env_args.x0_text, "CDF query point")->required();
    env->add_option("--mmax", env_args.mmax, "largest order")->required();
    env->add_option("--out-upper", env_args.out_upper, "upper bound file")->required();
    env->add_option("--out-lower", env_args.out_lower, "lower bound file")->required();
    env->add_option("--tol", env_args.tol_text, "enclosure tolerance");
    env->add_flag("--max-override", env_args.max_override,
                  "allow orders beyond the default cap of 30");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (seq->parsed()) return run_seq(seq_args);
        if (conv->parsed()) return run_convert(conv_args);
        if (check->parsed()) return run_check(check_args);
        if (bound->parsed()) {
            if (bound_args.dist.empty() == bound_args.seq.empty())
                throw DomainError("bound: give exactly one of --dist or --seq");
            if (bound_args.x0_text.empty() == (bound_args.k < 0))
                throw DomainError("bound: give exactly one of --x0 or --k");
            return run_bound(bound_args);
        }
        if (env->parsed()) return run_envelope(env_args);
    } catch (const primseq::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const primseq::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
