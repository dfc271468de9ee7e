#pragma once

#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "perfdel/families.hpp"
#include "perfdel/json_io.hpp"
#include "perfdel/lift.hpp"
#include "perfdel/verify.hpp"

namespace perfdel::cli {

// exit codes: 0 success, 2 bad parameters, 3 failed mathematical check,
// 4 malformed I/O, 5 contradiction with a certified property
enum ExitCode : int { kOk = 0, kBadParams = 2, kCheckFailed = 3, kBadInput = 4, kContradiction = 5 };

namespace detail {

inline QVec parse_vector_arg(const std::string& s) {
    QVec v;
    std::stringstream ss(s);
    std::string tok;
    std::vector<Rat> entries;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw MalformedInput("empty component in vector argument");
        entries.push_back(Rat::parse(tok));
    }
    if (entries.empty()) throw MalformedInput("empty vector argument");
    v.e = std::move(entries);
    return v;
}

inline void print_certificate(std::ostream& out, const std::string& name, const Certificate& c) {
    out << name << ": " << (c.verdict ? "PASS" : "FAIL");
    if (!c.verdict && !c.detail.empty()) out << " (" << c.detail << ")";
    if (c.nullity) out << " nullity=" << *c.nullity;
    if (c.min_value) out << " min=" << c.min_value->str();
    if (c.minimizer_count) out << " minimizers=" << *c.minimizer_count;
    if (!c.verdict && c.witness_point) out << " witness=" << to_string(*c.witness_point);
    if (!c.verdict && c.witness_pair)
        out << " witness_pair=" << to_string(c.witness_pair->first) << ", "
            << to_string(c.witness_pair->second);
    out << "\n";
}

struct ConstructArgs {
    std::string family;
    size_t d = 0, s = 1, k = 2;
    std::string out_path;
    bool verify = false;
};

inline int run_construct(const ConstructArgs& a, std::ostream& out, std::ostream& err) {
    PolytopeSpec P;
    bool symmetric = false;
    try {
        if (a.family == "p") {
            P = polytope_P(FamilyParams(a.d, a.s, a.k));
            symmetric = true;
        } else if (a.family == "g6") {
            P = g6_vertices(a.d);
        } else {
            err << "unknown family '" << a.family << "' (expected p or g6)\n";
            return kBadParams;
        }
    } catch (const std::invalid_argument& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return kBadParams;
    }

    std::vector<Certificate> certs;
    bool all_ok = true;
    if (a.verify) {
        certs.push_back(is_delaunay(P));
        print_certificate(out, "delaunay", certs.back());
        certs.push_back(is_perfect(P.vertices, P.ambient_dim));
        print_certificate(out, "perfect", certs.back());
        if (symmetric) {
            certs.push_back(cross_criterion(P));
            print_certificate(out, "cross", certs.back());
        }
        for (const auto& c : certs) all_ok = all_ok && c.verdict;
    }
    write_polytope_file(a.out_path, P, certs);
    out << "wrote " << a.out_path << " (" << P.vertices.size() << " vertices)\n";
    return all_ok ? kOk : kCheckFailed;
}

struct VerifyArgs {
    std::string input;
    bool delaunay = false, perfect = false, cross = false;
};

inline int run_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    if (!a.delaunay && !a.perfect && !a.cross) {
        err << "verify: pass at least one of --delaunay --perfect --cross\n";
        return kBadParams;
    }
    PolytopeSpec P = read_polytope_file(a.input);
    bool all_ok = true;
    if (a.delaunay) {
        auto c = is_delaunay(P);
        print_certificate(out, "delaunay", c);
        all_ok = all_ok && c.verdict;
    }
    if (a.perfect) {
        auto c = is_perfect(P.vertices, P.ambient_dim);
        print_certificate(out, "perfect", c);
        all_ok = all_ok && c.verdict;
    }
    if (a.cross) {
        auto c = cross_criterion(P);
        print_certificate(out, "cross", c);
        all_ok = all_ok && c.verdict;
    }
    return all_ok ? kOk : kCheckFailed;
}

struct DiagramArgs {
    size_t d = 0, k = 0;
    size_t s = 0;  // 0 = no supporting line requested
    std::string out_path;
    std::string emit = "csv";
};

inline int run_diagram(const DiagramArgs& a, std::ostream& out, std::ostream& err) {
    if (a.emit != "csv") {
        err << "diagram: unsupported emit format '" << a.emit << "'\n";
        return kBadParams;
    }
    std::vector<DiagramPoint> M;
    SupportingLine line;
    bool with_line = a.s > 0;
    try {
        M = phi_diagram_M(a.d, a.k);
        if (with_line) line = supporting_line(a.d, a.s, a.k);
    } catch (const std::invalid_argument& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return kBadParams;
    }

    std::ostringstream csv;
    csv << "l,a,phi1,phi2\n";
    for (const auto& p : M)
        csv << p.l << "," << p.a << "," << p.phi1.str() << "," << p.phi2.str() << "\n";
    if (with_line) csv << line.alpha.str() << "," << line.beta.str() << "\n";

    if (a.out_path.empty()) {
        out << csv.str();
    } else {
        std::ofstream f(a.out_path);
        if (!f) {
            err << "cannot open output file: " << a.out_path << "\n";
            return kBadInput;
        }
        f << csv.str();
    }
    if (with_line && !line.certificate.verdict) {
        print_certificate(err, "supporting-line", line.certificate);
        return kCheckFailed;
    }
    return kOk;
}

struct SectionArgs {
    std::string input;
    std::string u_arg;
    std::string level_arg;
    bool scan = false;
    std::string out_path;
};

inline int run_section(const SectionArgs& a, std::ostream& out, std::ostream& err) {
    PolytopeSpec P = read_polytope_file(a.input);
    QVec u = parse_vector_arg(a.u_arg);
    if (u.dim() != P.ambient_dim) {
        err << "section: direction has dimension " << u.dim() << ", polytope has "
            << P.ambient_dim << "\n";
        return kBadInput;
    }
    if (a.scan == a.level_arg.empty()) {
        // either scan all levels or slice one
        if (a.scan) {
            std::vector<Rat> levels;
            for (const auto& v : P.vertices) levels.push_back(dot(v, u));
            std::sort(levels.begin(), levels.end());
            levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
            for (const auto& c : levels) {
                auto S = section(P, u, c);
                bool perfect = false;
                if (S.vertices.size() >= 2) {
                    auto cert = is_perfect(S.vertices, S.ambient_dim);
                    perfect = cert.verdict;
                }
                out << "level " << c.str() << ": " << S.vertices.size() << " vertices, perfect: "
                    << (perfect ? "yes" : "no") << "\n";
            }
            return kOk;
        }
        Rat c = Rat::parse(a.level_arg);
        auto S = section(P, u, c);
        out << "level " << c.str() << ": " << S.vertices.size() << " vertices\n";
        if (!a.out_path.empty()) {
            write_polytope_file(a.out_path, S);
            out << "wrote " << a.out_path << "\n";
        }
        return kOk;
    }
    err << "section: pass exactly one of --level or --scan\n";
    return kBadParams;
}

struct LiftArgs {
    std::string input;
    std::string cell_path;
    std::string auto_cell;
    std::string out_path;
};

inline int run_lift(const LiftArgs& a, std::ostream& out, std::ostream& err) {
    PolytopeSpec base = read_polytope_file(a.input);
    if (a.cell_path.empty() == a.auto_cell.empty()) {
        err << "lift: pass exactly one of --cell or --auto-cell\n";
        return kBadParams;
    }
    PolytopeSpec cell;
    if (!a.cell_path.empty()) {
        cell = read_polytope_file(a.cell_path);
    } else {
        QVec point = parse_vector_arg(a.auto_cell);
        if (point.dim() != base.ambient_dim) {
            err << "lift: auto-cell point has wrong dimension\n";
            return kBadInput;
        }
        QFunc p = perfect_function(base.vertices);
        cell = delaunay_cell_at_coset(p.form, base.coset, point);
    }
    auto outcome = lift_perfect(base, cell);
    out << "t_star = " << outcome.t_star.str() << "\n";
    out << "new zeros: " << outcome.new_zeros.size() << "\n";
    out << "lifted vertices: " << outcome.lifted.vertices.size() << "\n";
    write_polytope_file(a.out_path, outcome.lifted,
                        {outcome.delaunay_cert, outcome.perfect_cert});
    out << "wrote " << a.out_path << "\n";
    return kOk;
}

}  // namespace detail

/// Dispatches one command line (without the program name). Returns the exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact constructions and certificates for perfect Delaunay polytopes"};
    app.require_subcommand(1);

    detail::ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "build a family polytope");
    construct->add_option("--family", ca.family, "p or g6")->required();
    construct->add_option("--d", ca.d, "dimension parameter")->required();
    construct->add_option("--s", ca.s, "level parameter (family p)");
    construct->add_option("--k", ca.k, "weight parameter (family p)");
    construct->add_option("--out", ca.out_path, "output JSON path")->required();
    construct->add_flag("--verify", ca.verify, "attach certificates");

    detail::VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run certificates on a polytope file");
    verify->add_option("--input", va.input, "polytope JSON path")->required();
    verify->add_flag("--delaunay", va.delaunay, "empty-ellipsoid check");
    verify->add_flag("--perfect", va.perfect, "rank test");
    verify->add_flag("--cross", va.cross, "minimal-vector cross criterion");

    detail::DiagramArgs da;
    auto* diagram = app.add_subcommand("diagram", "emit the planar diagram as CSV");
    diagram->add_option("--d", da.d, "dimension")->required();
    diagram->add_option("--k", da.k, "weight parameter")->required();
    diagram->add_option("--s", da.s, "append the supporting line for this level");
    diagram->add_option("--out", da.out_path, "write CSV here instead of stdout");
    diagram->add_option("--emit", da.emit, "output format (csv)");

    detail::SectionArgs sa;
    auto* sect = app.add_subcommand("section", "hyperplane sections of a polytope file");
    sect->add_option("--input", sa.input, "polytope JSON path")->required();
    sect->add_option("--u", sa.u_arg, "direction vector, comma separated")->required();
    sect->add_option("--level", sa.level_arg, "slice level (exact rational)");
    sect->add_flag("--scan", sa.scan, "report every nonempty level");
    sect->add_option("--out", sa.out_path, "output JSON path for --level");

    detail::LiftArgs la;
    auto* lift = app.add_subcommand("lift", "one-dimension-up lifting construction");
    lift->add_option("--input", la.input, "base polytope JSON path")->required();
    lift->add_option("--cell", la.cell_path, "cell polytope JSON path");
    lift->add_option("--auto-cell", la.auto_cell, "find the cell at this point");
    lift->add_option("--out", la.out_path, "output JSON path")->required();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << e.what() << "\n";
        return kBadParams;
    }

    try {
        if (construct->parsed()) return detail::run_construct(ca, out, err);
        if (verify->parsed()) return detail::run_verify(va, out, err);
        if (diagram->parsed()) return detail::run_diagram(da, out, err);
        if (sect->parsed()) return detail::run_section(sa, out, err);
        if (lift->parsed()) return detail::run_lift(la, out, err);
    } catch (const TranslateCell& e) {
        err << e.what() << "\n";
        return kCheckFailed;
    } catch (const CylinderRegime& e) {
        err << e.what() << "\n";
        return kContradiction;
    } catch (const MalformedInput& e) {
        err << e.what() << "\n";
        return kBadInput;
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return kBadParams;
    } catch (const std::logic_error& e) {
        err << "internal contradiction: " << e.what() << "\n";
        return kContradiction;
    }
    err << "no subcommand\n";
    return kBadParams;
}

}  // namespace perfdel::cli
