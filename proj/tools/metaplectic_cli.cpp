#include <metaplectic/metaplectic.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace mp = metaplectic;
using mp::cplx;
using mp::ExactPhase;
using mp::RMat;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Case {
    json in, expected, got;
    double residual = 0;
    bool pass = true;
};

struct Report {
    std::string check;
    json params = json::object();
    std::vector<Case> cases;
    bool pass = true;

    explicit Report(std::string name) : check(std::move(name)) {}

    void add(Case c) {
        pass = pass && c.pass;
        cases.push_back(std::move(c));
    }
};

struct Output {
    std::string format = "json";
    std::string path;
    std::uint64_t seed = 1;
};

std::string fmt_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fmt_cplx(cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
    return buf;
}

std::string fmt_mat(const RMat& g) {
    std::ostringstream os;
    os << "[[" << g.a << "," << g.b << "],[" << g.c << "," << g.d << "]]";
    return os.str();
}

Case exact_case(json in, const ExactPhase& want, const ExactPhase& got) {
    return {std::move(in), want.str(), got.str(), std::abs(want.value() - got.value()), want == got};
}

Case numeric_case(json in, json expected, json got, double residual, double tol) {
    return {std::move(in), std::move(expected), std::move(got), residual, residual < tol};
}

std::string csv_field(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

std::string render(const Report& r, const std::string& format) {
    if (format == "csv") {
        std::string out = "check,index,in,expected,got,residual,pass\n";
        for (std::size_t i = 0; i < r.cases.size(); ++i) {
            const Case& c = r.cases[i];
            out += csv_field(r.check) + "," + std::to_string(i) + "," + csv_field(c.in) + "," + csv_field(c.expected) +
                   "," + csv_field(c.got) + "," + fmt_real(c.residual) + "," + (c.pass ? "true" : "false") + "\n";
        }
        return out;
    }
    json j;
    j["check"] = r.check;
    j["params"] = r.params;
    j["cases"] = json::array();
    for (const Case& c : r.cases)
        j["cases"].push_back({{"in", c.in}, {"expected", c.expected}, {"got", c.got}, {"residual", fmt_real(c.residual)}, {"pass", c.pass}});
    j["pass"] = r.pass;
    return j.dump(2) + "\n";
}

int emit(const Report& r, const Output& o) {
    std::string text = render(r, o.format);
    std::string path = o.path;
    if (path.empty()) {
        if (const char* dir = std::getenv("METAPLECTIC_OUT_DIR"); dir && *dir) {
            std::filesystem::create_directories(dir);
            path = (std::filesystem::path(dir) / (r.check + "." + o.format)).string();
        }
    }
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << text;
        std::cerr << r.check << ": " << (r.pass ? "pass" : "FAIL") << " -> " << path << "\n";
    }
    return r.pass ? 0 : 1;
}

std::vector<RMat> parse_matrices(const std::string& text) {
    std::vector<RMat> out;
    std::size_t pos = 0;
    while (true) {
        pos = text.find_first_not_of(" \t", pos);
        if (pos == std::string::npos) break;
        std::size_t end = text.find("]]", pos);
        if (end == std::string::npos) throw std::invalid_argument("unterminated matrix in '" + text + "'");
        out.push_back(mp::parse_matrix(text.substr(pos, end + 2 - pos)));
        pos = end + 2;
    }
    return out;
}

RMat parse_element(const std::string& text) {
    if (text.find('[') != std::string::npos) return mp::parse_matrix(text);
    return mp::evaluate(mp::parse_word(text));
}

double parse_real(const std::string& s) { return mp::to_double(mp::parse_rational(s)); }

// "i", "-2i", "0.25+2i", "-1-i", "0.5"
cplx parse_complex(std::string s) {
    std::erase(s, ' ');
    if (s.empty()) throw std::invalid_argument("empty complex number");
    if (s.back() != 'i') return {parse_real(s), 0};
    s.pop_back();
    std::size_t k = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            k = i;
            break;
        }
    }
    std::string re = k == std::string::npos ? "" : s.substr(0, k);
    std::string im = k == std::string::npos ? s : s.substr(k);
    double y = im.empty() || im == "+" ? 1.0 : im == "-" ? -1.0 : parse_real(im);
    return {re.empty() ? 0.0 : parse_real(re), y};
}

int count_set(std::initializer_list<bool> flags) {
    int n = 0;
    for (bool f : flags) n += f;
    return n;
}

// ---- cocycle ----

struct CocycleArgs {
    std::string pair;
    std::string kind = "all";
    long sweep = 0;
};

template <class F>
bool cocycle_identity(F c, const RMat& g1, const RMat& g2, const RMat& g3, ExactPhase& lhs, ExactPhase& rhs) {
    lhs = c(g1, g2) * c(g1 * g2, g3);
    rhs = c(g1, g2 * g3) * c(g2, g3);
    return lhs == rhs;
}

int cmd_cocycle(const CocycleArgs& a, const Output& o) {
    if (a.pair.empty() == (a.sweep <= 0)) throw UsageError("cocycle: give exactly one of --pair or --sweep");
    using Fn = ExactPhase (*)(const RMat&, const RMat&);
    const std::vector<std::pair<std::string, Fn>> kinds{{"ctilde", mp::c_tilde<mp::Rational>},
                                                        {"cbar", mp::c_bar<mp::Rational>},
                                                        {"Ctilde", mp::C_tilde<mp::Rational>},
                                                        {"Cbar", mp::C_bar<mp::Rational>}};
    if (!a.pair.empty()) {
        auto ms = parse_matrices(a.pair);
        if (ms.size() != 2) throw std::invalid_argument("cocycle --pair needs two matrices");
        for (const RMat& g : ms)
            if (!mp::is_sl2pm(g)) throw std::invalid_argument("matrix " + fmt_mat(g) + " has determinant other than ±1");
        Report r{"cocycle.pair"};
        r.params = {{"g1", fmt_mat(ms[0])}, {"g2", fmt_mat(ms[1])}, {"kind", a.kind}};
        bool any = false;
        for (const auto& [name, fn] : kinds) {
            if (a.kind != "all" && a.kind != name) continue;
            bool sl2 = ms[0].det() == 1 && ms[1].det() == 1;
            if (!sl2 && (name == "ctilde" || name == "cbar")) {
                if (a.kind != "all") throw std::invalid_argument(name + " needs determinant 1");
                continue;
            }
            ExactPhase v = fn(ms[0], ms[1]);
            r.add({name, nullptr, v.str(), 0, true});
            any = true;
        }
        if (!any) throw UsageError("unknown --kind " + a.kind);
        return emit(r, o);
    }
    Report r{"cocycle.sweep"};
    mp::sampling::Rng rng(o.seed);
    long checked = 0;
    for (long i = 0; i < a.sweep; ++i) {
        RMat s1 = mp::sampling::sl2_rational(rng), s2 = mp::sampling::sl2_rational(rng), s3 = mp::sampling::sl2_rational(rng);
        RMat h1 = mp::sampling::sl2pm_rational(rng), h2 = mp::sampling::sl2pm_rational(rng), h3 = mp::sampling::sl2pm_rational(rng);
        for (const auto& [name, fn] : kinds) {
            if (a.kind != "all" && a.kind != name) continue;
            bool pm = name == "Ctilde" || name == "Cbar";
            const RMat &g1 = pm ? h1 : s1, &g2 = pm ? h2 : s2, &g3 = pm ? h3 : s3;
            ExactPhase lhs, rhs;
            if (!cocycle_identity(fn, g1, g2, g3, lhs, rhs))
                r.add(exact_case(json{{"kind", name}, {"index", i}, {"g", {fmt_mat(g1), fmt_mat(g2), fmt_mat(g3)}}}, lhs, rhs));
            ++checked;
        }
    }
    if (checked == 0) throw UsageError("unknown --kind " + a.kind);
    r.params = {{"sweep", a.sweep}, {"seed", o.seed}, {"kind", a.kind}, {"checked", checked}, {"failures", r.cases.size()}};
    return emit(r, o);
}

// ---- split ----

struct SplitArgs {
    std::string map, group;
    bool chi = false, epsilon = false, obstruction = false;
    std::string word;
    long sweep = 0;
};

RMat sample_group(const std::string& group, mp::sampling::Rng& rng) {
    if (group == "gamma2hat") return mp::evaluate(mp::sampling::gamma2hat_word(rng));
    if (group == "gamma2") return mp::sampling::gamma2_element(rng);
    return mp::sampling::sl2z_element(rng);
}

std::string factored_chi(const mp::GeneratorWord& w) {
    std::string out;
    for (const auto& l : w) {
        ExactPhase v = mp::chi_from_word({l});
        if (!out.empty()) out += " · ";
        out += mp::to_string(l) + " ↦ " + v.str();
    }
    return out.empty() ? "1" : out;
}

int split_map(const SplitArgs& a, const Output& o) {
    struct MapSpec {
        std::vector<mp::TrivializationMap> maps;
        std::vector<mp::CocycleFn> cocycles;
        std::vector<std::string> groups;
    };
    mp::CocycleFn ct = mp::c_tilde<mp::Rational>, cb = mp::c_bar<mp::Rational>;
    std::map<std::string, MapSpec> table{
        {"beta-tilde", {{mp::beta_tilde_map()}, {ct}, {"gamma2hat", "gamma2"}}},
        {"beta-bar", {{mp::beta_bar_map()}, {cb}, {"gamma2"}}},
        {"beta1-bar", {{mp::beta1_bar_map()}, {cb}, {"sl2z", "gamma2hat", "gamma2"}}},
        {"beta1-tilde", {{mp::beta1_tilde_map()}, {ct}, {"sl2z", "gamma2hat", "gamma2"}}},
        {"asai", {{mp::beta1_bar_map(), mp::beta1_tilde_map()}, {cb, ct}, {"sl2z", "gamma2hat", "gamma2"}}},
    };
    auto it = table.find(a.map);
    if (it == table.end()) throw UsageError("unknown --map " + a.map);
    const MapSpec& spec = it->second;
    std::string group = a.group.empty() ? spec.groups.front() : a.group;
    if (std::find(spec.groups.begin(), spec.groups.end(), group) == spec.groups.end())
        throw UsageError("--map " + a.map + " is not defined on --group " + group);
    if (a.sweep <= 0) throw UsageError("split --map needs --sweep N with N > 0");
    mp::sampling::Rng rng(o.seed);
    std::vector<std::pair<RMat, RMat>> pairs;
    for (long i = 0; i < a.sweep; ++i) {
        RMat g1 = sample_group(group, rng);
        pairs.emplace_back(g1, sample_group(group, rng));
    }
    Report r{"split.map"};
    std::size_t checked = 0;
    for (std::size_t k = 0; k < spec.maps.size(); ++k) {
        mp::CoboundaryReport rep = mp::coboundary_check(spec.cocycles[k], spec.maps[k], pairs);
        checked += rep.checked;
        for (const auto& f : rep.failures)
            r.add(exact_case(json{{"map", spec.maps[k].name}, {"index", f.index},
                                  {"g", {fmt_mat(pairs[f.index].first), fmt_mat(pairs[f.index].second)}}},
                             f.expected, f.got));
    }
    r.params = {{"map", a.map}, {"group", group}, {"sweep", a.sweep}, {"seed", o.seed}, {"checked", checked},
                {"failures", r.cases.size()}};
    return emit(r, o);
}

int split_chi(const SplitArgs& a, const Output& o) {
    Report r{"split.chi"};
    if (!a.word.empty()) {
        RMat g = mp::evaluate(mp::parse_word(a.word));
        if (!mp::in_gamma2(g)) throw std::invalid_argument("word does not evaluate into Γ(2)");
        mp::GeneratorWord canon = mp::gamma2_decompose(g);
        ExactPhase closed = mp::chi(g);
        r.params = {{"word", a.word}, {"matrix", fmt_mat(g)}, {"canonical", mp::to_string(canon)},
                    {"factored", factored_chi(canon)}, {"value", closed.str()}};
        r.add(exact_case("closed form vs generator values", mp::chi_from_word(canon), closed));
        r.add(exact_case("closed form vs beta1-tilde / beta-tilde", mp::chi_quotient(g), closed));
        return emit(r, o);
    }
    if (a.sweep <= 0) throw UsageError("split --chi needs --word or --sweep");
    mp::sampling::Rng rng(o.seed);
    RMat mI = mp::neg_identity<mp::Rational>();
    for (long i = 0; i < a.sweep; ++i) {
        RMat g1 = mp::evaluate(mp::sampling::gamma2_word(rng)), g2 = mp::evaluate(mp::sampling::gamma2_word(rng));
        ExactPhase c1 = mp::chi(g1), c2 = mp::chi(g2), c12 = mp::chi(g1 * g2);
        json in{{"index", i}, {"g", {fmt_mat(g1), fmt_mat(g2)}}};
        if (!(c12 == c1 * c2)) r.add(exact_case(in, c1 * c2, c12));
        if (!(mp::chi(mI * g1) == c1)) r.add(exact_case(in, c1, mp::chi(mI * g1)));
    }
    r.params = {{"sweep", a.sweep}, {"seed", o.seed}, {"failures", r.cases.size()}};
    return emit(r, o);
}

int split_epsilon(const SplitArgs& a, const Output& o) {
    Report r{"split.epsilon"};
    auto one = [&](const mp::GeneratorWord& w, json in) {
        RMat g = mp::evaluate(w);
        ExactPhase e = mp::epsilon_word(w);
        r.add(exact_case(std::move(in), ExactPhase{}, e * mp::beta_tilde(g)));
        return e;
    };
    if (!a.word.empty()) {
        mp::GeneratorWord w = mp::parse_word(a.word);
        ExactPhase e = one(w, a.word);
        r.params = {{"word", a.word}, {"matrix", fmt_mat(mp::evaluate(w))}, {"epsilon", e.str()}};
        return emit(r, o);
    }
    if (a.sweep <= 0) throw UsageError("split --epsilon needs --word or --sweep");
    mp::sampling::Rng rng(o.seed);
    for (long i = 0; i < a.sweep; ++i) {
        mp::GeneratorWord w = mp::sampling::gamma2hat_word(rng);
        one(w, mp::to_string(w));
    }
    std::erase_if(r.cases, [](const Case& c) { return c.pass; });
    r.params = {{"sweep", a.sweep}, {"seed", o.seed}, {"failures", r.cases.size()}};
    return emit(r, o);
}

int split_obstruction(const SplitArgs& a, const Output& o) {
    if (a.sweep <= 0) throw UsageError("split --obstruction needs --sweep N with N > 0");
    Report r{"split.obstruction"};
    mp::sampling::Rng rng(o.seed);
    for (long i = 0; i < a.sweep; ++i) {
        RMat g = mp::sampling::gamma2_element(rng);
        ExactPhase want = mp::gamma2pm_obstruction_closed(g), got = mp::gamma2pm_obstruction(g);
        if (!(want == got)) r.add(exact_case(json{{"index", i}, {"g", fmt_mat(g)}}, want, got));
    }
    r.params = {{"sweep", a.sweep}, {"seed", o.seed}, {"failures", r.cases.size()}};
    return emit(r, o);
}

int cmd_split(const SplitArgs& a, const Output& o) {
    if (count_set({!a.map.empty(), a.chi, a.epsilon, a.obstruction}) != 1)
        throw UsageError("split: give exactly one of --map, --chi, --epsilon, --obstruction");
    if (!a.map.empty()) return split_map(a, o);
    if (a.chi) return split_chi(a, o);
    if (a.epsilon) return split_epsilon(a, o);
    return split_obstruction(a, o);
}

// ---- weilrep ----

struct WeilArgs {
    bool compose = false, fresnel = false, lattice = false, intertwiner = false, eigen = false;
    long pairs = 200;
    std::size_t grid = 4096;
    std::optional<double> tol;
    std::string letter;
    double max_badness = 30;
};

int weil_compose(const WeilArgs& a, const Output& o) {
    double tol = a.tol.value_or(1e-6);
    Report r{"weilrep.compose"};
    mp::GridFunction f = mp::gaussian_test_vector(a.grid);
    mp::sampling::Rng rng(o.seed);
    long done = 0, rejected = 0;
    double worst_phase = 0, worst_res = 0;
    while (done < a.pairs) {
        mp::GeneratorWord w1 = mp::sampling::weil_word(rng), w2 = mp::sampling::weil_word(rng);
        if (mp::compose_badness(mp::evaluate(w1), mp::evaluate(w2)) > a.max_badness) {
            ++rejected;
            continue;
        }
        mp::ComposeResult c = mp::compose_check(w1, w2, f);
        worst_phase = std::max(worst_phase, c.phase_error);
        worst_res = std::max(worst_res, c.residual);
        double res = std::max(c.phase_error, c.residual);
        r.add(numeric_case(mp::to_string(w1) + " | " + mp::to_string(w2), c.expected.str(), fmt_cplx(c.measured), res, tol));
        ++done;
    }
    r.params = {{"pairs", a.pairs}, {"grid", a.grid}, {"seed", o.seed}, {"tol", tol}, {"max_badness", a.max_badness},
                {"rejected", rejected}, {"worst_phase_error", fmt_real(worst_phase)}, {"worst_residual", fmt_real(worst_res)}};
    return emit(r, o);
}

int weil_fresnel(const WeilArgs& a, const Output& o) {
    double tol = a.tol.value_or(1e-8);
    Report r{"weilrep.fresnel"};
    const double pi = std::numbers::pi;
    std::vector<std::pair<std::string, std::function<cplx(double)>>> fs{
        {"exp(-pi x^2)", [&](double x) { return cplx(std::exp(-pi * x * x)); }},
        {"x exp(-pi x^2)", [&](double x) { return cplx(x * std::exp(-pi * x * x)); }},
        {"(1+x) exp(-2 pi x^2)", [&](double x) { return cplx((1 + x) * std::exp(-2 * pi * x * x)); }},
    };
    for (const auto& [name, fn] : fs) {
        mp::GridFunction g = mp::GridFunction::sample(a.grid, fn, [](double) { return cplx(0); });
        for (int s : {1, -1}) {
            mp::FresnelResult fr = mp::fresnel_check(g.plus, s);
            r.add(numeric_case(json{{"f", name}, {"sign", s}}, fmt_cplx(fr.rhs), fmt_cplx(fr.lhs), fr.residual, tol));
        }
    }
    r.params = {{"grid", a.grid}, {"tol", tol}};
    return emit(r, o);
}

int weil_lattice(const WeilArgs& a, const Output& o) {
    if (a.letter.empty()) throw UsageError("weilrep --lattice needs --letter");
    mp::GeneratorWord w = mp::parse_word(a.letter);
    if (w.size() != 1) throw std::invalid_argument("--letter must be a single generator");
    double tol = a.tol.value_or(1e-8);
    const std::vector<std::pair<double, double>> pts{{0.3, 0.1}, {-0.7, 0.45}, {0.2, -1.3}, {1.1, 0.8}};
    mp::LatticeReport rep = mp::lattice_action_check(w.front(), pts, a.grid);
    Report r{"weilrep.lattice"};
    for (const auto& c : rep.cases)
        r.add(numeric_case(json{{"eps", c.eps}, {"X", c.X}, {"X*", c.Xs}}, c.expected.str(), fmt_cplx(c.measured), c.rel_error, tol));
    r.params = {{"letter", rep.letter}, {"grid", a.grid}, {"tol", tol}, {"phase", mp::upsilon(w.front().matrix<mp::Rational>(), 1).str()}};
    return emit(r, o);
}

int weil_intertwiner(const WeilArgs& a, const Output& o) {
    double tol = a.tol.value_or(1e-6);
    Report r{"weilrep.intertwiner"};
    for (double c : {0.5, 1.0, 2.0}) {
        for (double s : {0.5, 1.0, 2.0, -0.5, -1.0, -2.0}) {
            mp::IntertwinerResult ir = mp::intertwiner_triple_check(c, s);
            r.add(numeric_case(json{{"c", c}, {"s", s}}, ir.expected.str(), fmt_cplx(ir.measured),
                               std::max(ir.phase_error, ir.residual), tol));
        }
    }
    r.params = {{"tol", tol}};
    return emit(r, o);
}

int weil_eigen(const WeilArgs& a, const Output& o) {
    mp::EigenReport rep = mp::gaussian_eigen_check(a.grid);
    Report r{"weilrep.eigen"};
    for (const auto& e : rep.entries) {
        double tol = a.tol.value_or(e.tol);
        r.add(numeric_case(e.name, 0.0, fmt_real(e.residual), e.residual, tol));
    }
    r.params = {{"grid", a.grid}};
    if (a.tol) r.params["tol"] = *a.tol;
    return emit(r, o);
}

int cmd_weilrep(const WeilArgs& a, const Output& o) {
    if (count_set({a.compose, a.fresnel, a.lattice, a.intertwiner, a.eigen}) != 1)
        throw UsageError("weilrep: give exactly one of --compose, --fresnel, --lattice, --intertwiner, --eigen");
    if (a.compose) return weil_compose(a, o);
    if (a.fresnel) return weil_fresnel(a, o);
    if (a.lattice) return weil_lattice(a, o);
    if (a.intertwiner) return weil_intertwiner(a, o);
    return weil_eigen(a, o);
}

// ---- theta ----

struct ThetaArgs {
    bool value = false, check = false, lambda = false;
    std::string z = "i", gamma;
    int eps = 1, half_plane = 1;
    std::string weight = "1/2";
    double tail = 1e-16, tol = 1e-10;
    long words = 100;
    int len = 6;
};

mp::Weight parse_weight(const std::string& w) {
    if (w == "1/2") return mp::Weight::Half;
    if (w == "3/2") return mp::Weight::ThreeHalves;
    throw UsageError("--weight must be 1/2 or 3/2");
}

int theta_value(const ThetaArgs& a, const Output& o) {
    cplx z = parse_complex(a.z);
    mp::ThetaValue v = mp::theta_eval({z, a.eps, parse_weight(a.weight), a.tail});
    Report r{"theta.value"};
    r.add({json{{"z", fmt_cplx(z)}, {"eps", a.eps}, {"weight", a.weight}}, nullptr, fmt_cplx(v.value), v.tail, true});
    r.params = {{"tail_bound", a.tail}, {"tail", fmt_real(v.tail)}, {"terms", v.terms}};
    return emit(r, o);
}

int theta_check(const ThetaArgs& a, const Output& o) {
    const std::vector<cplx> pts{{0, 1}, {0.25, 2}, {-1, 1}, {0.3, 0.7}, {0, -1}, {0.25, -2}, {-1, -1}, {0.3, -0.7}};
    mp::Weight w = parse_weight(a.weight);
    Report r{"theta.check"};
    mp::sampling::Rng rng(o.seed);
    long checked = 0, excluded = 0;
    double worst = 0;
    for (long i = 0; i < a.words; ++i) {
        mp::GeneratorWord word = mp::sampling::gamma2hat_pm_word(rng, a.len);
        RMat g = mp::evaluate(word);
        for (cplx z : pts) {
            int eps = mp::sgn(g.det()) * (z.imag() > 0 ? 1 : -1);
            if (mp::lambda_excluded(g, eps)) {
                ++excluded;
                continue;
            }
            mp::TransformationResult t = mp::transformation_check(g, z, eps, w, a.tail);
            worst = std::max(worst, t.residual);
            ++checked;
            if (t.residual >= a.tol)
                r.add(numeric_case(json{{"word", mp::to_string(word)}, {"z", fmt_cplx(z)}, {"eps", eps}}, fmt_cplx(t.rhs),
                                   fmt_cplx(t.lhs), t.residual, a.tol));
        }
    }
    mp::TransformationResult fp = mp::transformation_check(mp::omega<mp::Rational>(), cplx(0, 1), 1, w, a.tail);
    r.add(numeric_case(json{{"word", "omega"}, {"z", "i"}, {"eps", 1}}, fmt_cplx(fp.rhs), fmt_cplx(fp.lhs), fp.residual,
                       std::min(a.tol, 1e-12)));
    r.params = {{"words", a.words}, {"len", a.len}, {"weight", a.weight}, {"seed", o.seed}, {"tol", a.tol},
                {"checked", checked}, {"excluded", excluded}, {"worst_residual", fmt_real(worst)}};
    return emit(r, o);
}

int theta_lambda(const ThetaArgs& a, const Output& o) {
    if (a.gamma.empty()) throw UsageError("theta --lambda needs --gamma");
    RMat g = parse_element(a.gamma);
    ExactPhase lam = mp::multiplier_lambda(g, a.eps, a.half_plane);
    Report r{"theta.lambda"};
    r.add({json{{"gamma", fmt_mat(g)}, {"eps", a.eps}, {"half_plane", a.half_plane}}, nullptr, lam.str(), 0, true});
    r.params = {{"gamma", a.gamma}, {"upsilon", mp::upsilon(g, a.eps).str()}};
    return emit(r, o);
}

int cmd_theta(const ThetaArgs& a, const Output& o) {
    if (count_set({a.value, a.check, a.lambda}) != 1) throw UsageError("theta: give exactly one of --value, --check, --lambda");
    if (a.value) return theta_value(a, o);
    if (a.check) return theta_check(a, o);
    return theta_lambda(a, o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metaplectic cocycles, trivializations, Weil representation and theta checks"};
    app.require_subcommand(1);
    app.fallthrough();
    Output out;
    app.add_option("--seed", out.seed, "random seed")->capture_default_str();
    app.add_option("--format", out.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--out", out.path, "output file (default: stdout or $METAPLECTIC_OUT_DIR)");

    CocycleArgs ca;
    auto* cc = app.add_subcommand("cocycle", "evaluate cocycles and sweep the cocycle identity");
    cc->add_option("--pair", ca.pair, "two matrices, e.g. \"[[0,-1],[1,0]] [[0,-1],[1,0]]\"");
    cc->add_option("--kind", ca.kind)->check(CLI::IsMember({"all", "ctilde", "cbar", "Ctilde", "Cbar"}))->capture_default_str();
    cc->add_option("--sweep", ca.sweep, "number of random triples");

    SplitArgs sa;
    auto* sc = app.add_subcommand("split", "coboundary sweeps, χ and ε_g");
    sc->add_option("--map", sa.map)->check(CLI::IsMember({"beta-tilde", "beta-bar", "beta1-bar", "beta1-tilde", "asai"}));
    sc->add_option("--group", sa.group)->check(CLI::IsMember({"gamma2hat", "gamma2", "sl2z"}));
    sc->add_flag("--chi", sa.chi);
    sc->add_flag("--epsilon", sa.epsilon);
    sc->add_flag("--obstruction", sa.obstruction);
    sc->add_option("--word", sa.word);
    sc->add_option("--sweep", sa.sweep);

    WeilArgs wa;
    auto* wc = app.add_subcommand("weilrep", "discretized Weil representation checks");
    wc->add_flag("--compose", wa.compose);
    wc->add_flag("--fresnel", wa.fresnel);
    wc->add_flag("--lattice", wa.lattice);
    wc->add_flag("--intertwiner", wa.intertwiner);
    wc->add_flag("--eigen", wa.eigen);
    wc->add_option("--pairs", wa.pairs)->capture_default_str();
    wc->add_option("--grid", wa.grid)->capture_default_str();
    wc->add_option("--tol", wa.tol);
    wc->add_option("--letter", wa.letter);
    wc->add_option("--max-badness", wa.max_badness)->capture_default_str();

    ThetaArgs ta;
    auto* tc = app.add_subcommand("theta", "theta values, transformation law and multiplier");
    tc->add_flag("--value", ta.value);
    tc->add_flag("--check", ta.check);
    tc->add_flag("--lambda", ta.lambda);
    tc->add_option("--z", ta.z)->capture_default_str();
    tc->add_option("--eps", ta.eps)->check(CLI::IsMember({1, -1}))->capture_default_str();
    tc->add_option("--half-plane", ta.half_plane)->check(CLI::IsMember({1, -1}))->capture_default_str();
    tc->add_option("--weight", ta.weight)->capture_default_str();
    tc->add_option("--tail", ta.tail)->capture_default_str();
    tc->add_option("--tol", ta.tol)->capture_default_str();
    tc->add_option("--words", ta.words)->capture_default_str();
    tc->add_option("--len", ta.len)->capture_default_str();
    tc->add_option("--gamma", ta.gamma, "word or matrix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        if (*cc) return cmd_cocycle(ca, out);
        if (*sc) return cmd_split(sa, out);
        if (*wc) return cmd_weilrep(wa, out);
        return cmd_theta(ta, out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
