#ifndef LORENTZ_CLI_HPP
#define LORENTZ_CLI_HPP

///
/// \file cli.hpp
///
/// Command-line front end. Arguments are a subcommand followed by key=value
/// pairs; infinite exponents are written "inf". Reports are CSV (a
/// `# schema=1` line, further `#` metadata, a header row, 17 significant
/// digits) or JSON lines.
///

#include "covnum.hpp"
#include "entropy.hpp"
#include "interp.hpp"
#include "opnorm.hpp"
#include "seqcore.hpp"
#include "sparse.hpp"
#include "verify.hpp"
#include "volume.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lorentz::cli {

enum class Format { csv, json };

struct ExperimentConfig
{
    std::string                        command;
    std::map<std::string, std::string> params;
    std::string                        output; ///< empty for standard output
    Format                             format = Format::csv;
};

/// Raised for invalid arguments; reported as a JSON error record.
struct UsageError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

inline ExperimentConfig parse_args(const std::vector<std::string>& args)
{
    if (args.empty()) throw UsageError("missing subcommand");
    ExperimentConfig cfg;
    cfg.command = args[0];
    for (std::size_t i = 1; i < args.size(); ++i) {
        const auto eq = args[i].find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + args[i] + "'");
        std::string key = args[i].substr(0, eq), value = args[i].substr(eq + 1);
        if (key == "format") {
            if (value == "csv") cfg.format = Format::csv;
            else if (value == "json") cfg.format = Format::json;
            else throw UsageError("format must be csv or json");
        } else if (key == "output") {
            cfg.output = value;
        } else if (!cfg.params.emplace(key, value).second) {
            throw UsageError("duplicate parameter '" + key + "'");
        }
    }
    return cfg;
}

using Cell = std::variant<std::string, double, long long>;

inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char       buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Collects rows and writes them in the configured format.
class Report
{
public:
    Report(std::string command, std::vector<std::string> columns) : command_(std::move(command)), columns_(std::move(columns))
    {
    }

    void meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }

    void row(std::vector<Cell> cells)
    {
        if (cells.size() != columns_.size()) throw std::logic_error("report row has the wrong width");
        rows_.push_back(std::move(cells));
    }

    void write(std::ostream& os, Format f) const
    {
        if (f == Format::csv) {
            os << "# schema=1\n# command=" << command_ << '\n';
            for (const auto& [k, v] : meta_) os << "# " << k << '=' << v << '\n';
            for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
            os << '\n';
            for (const auto& r : rows_) {
                for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
                os << '\n';
            }
            return;
        }
        nlohmann::ordered_json head{{"schema", 1}, {"command", command_}};
        for (const auto& [k, v] : meta_) head[k] = v;
        os << head.dump() << '\n';
        for (const auto& r : rows_) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < r.size(); ++i) {
                std::visit([&](const auto& v) { obj[columns_[i]] = v; }, r[i]);
            }
            os << obj.dump() << '\n';
        }
    }

private:
    static std::string csv_cell(const Cell& c)
    {
        if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
        if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
        const auto& s = std::get<std::string>(c);
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + '"';
    }

    std::string                                      command_;
    std::vector<std::string>                         columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<Cell>>                   rows_;
};

namespace detail {

// Typed access to the parameters; every key must be consumed.
class Params
{
public:
    explicit Params(const std::map<std::string, std::string>& p) : p_(p) {}

    bool has(const std::string& key) const { return p_.count(key) != 0; }

    std::string str(const std::string& key, std::optional<std::string> fallback = std::nullopt)
    {
        used_.insert(key);
        const auto it = p_.find(key);
        if (it != p_.end()) return it->second;
        if (fallback) return *fallback;
        throw UsageError("missing parameter '" + key + "'");
    }

    Exponent exponent(const std::string& key, std::optional<std::string> fallback = std::nullopt)
    {
        try {
            return parse_exponent(str(key, std::move(fallback)));
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError(key + ": " + e.what());
        }
    }

    double real(const std::string& key, std::optional<double> fallback = std::nullopt)
    {
        if (!has(key) && fallback) {
            used_.insert(key);
            return *fallback;
        }
        const std::string s = str(key);
        double            v = 0.0;
        const auto        r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
            throw UsageError(key + ": not a finite number: '" + s + "'");
        }
        return v;
    }

    std::uint64_t count(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt,
                        std::uint64_t min = 0)
    {
        std::uint64_t v = 0;
        if (!has(key) && fallback) {
            used_.insert(key);
            v = *fallback;
        } else {
            const std::string s    = str(key);
            const char*       last = s.data() + s.size();
            const auto        ri   = std::from_chars(s.data(), last, v);
            if (ri.ec != std::errc{} || ri.ptr != last) {
                // 1e6-style counts
                double     d = 0.0;
                const auto r = std::from_chars(s.data(), last, d);
                if (r.ec != std::errc{} || r.ptr != last || !(d >= 0.0) || d > 9.0e15 || d != std::floor(d)) {
                    throw UsageError(key + ": not a non-negative integer: '" + s + "'");
                }
                v = static_cast<std::uint64_t>(d);
            }
        }
        if (v < min) throw UsageError(key + " must be >= " + std::to_string(min));
        return v;
    }

    LorentzParams space(const std::string& p, const std::string& u)
    {
        const Exponent pe = exponent(p);
        return {pe, has(u) ? exponent(u) : pe};
    }

    Vec vector(const std::string& key)
    {
        const std::string s = str(key);
        Vec               x;
        std::size_t       start = 0;
        while (start <= s.size()) {
            const std::size_t end = std::min(s.find(',', start), s.size());
            double            v   = 0.0;
            const auto        r   = std::from_chars(s.data() + start, s.data() + end, v);
            if (r.ec != std::errc{} || r.ptr != s.data() + end || !std::isfinite(v)) {
                throw UsageError(key + ": bad entry in '" + s + "'");
            }
            x.push_back(v);
            start = end + 1;
        }
        return x;
    }

    void finish() const
    {
        for (const auto& [k, v] : p_) {
            if (!used_.count(k)) throw UsageError("unknown parameter '" + k + "'");
        }
    }

private:
    const std::map<std::string, std::string>& p_;
    std::set<std::string>                     used_;
};

inline EmbeddingSpec embedding(Params& ps)
{
    const LorentzParams src = ps.space("p", "u");
    const LorentzParams tgt = ps.space("q", "v");
    return {src, tgt, static_cast<std::size_t>(ps.count("n", std::nullopt, 1))};
}

inline std::string describe(const EmbeddingSpec& s)
{
    return "p=" + s.source.p.to_string() + " u=" + s.source.u.to_string() + " q=" + s.target.p.to_string() +
           " v=" + s.target.u.to_string() + " n=" + std::to_string(s.n);
}

inline int cmd_norm(Params& ps, std::optional<Report>& rep)
{
    const Vec           x  = ps.vector("x");
    const LorentzParams lp = ps.space("p", "u");
    ps.finish();
    rep.emplace("norm", std::vector<std::string>{"p", "u", "n", "norm"});
    rep->row({lp.p.to_string(), lp.u.to_string(), static_cast<long long>(x.size()), lorentz_norm(x, lp)});
    return 0;
}

inline int cmd_opnorm(Params& ps, std::optional<Report>& rep)
{
    const EmbeddingSpec spec   = embedding(ps);
    const std::string   method = ps.str("method", "all");
    const auto          seed   = ps.count("seed", 0);
    ps.finish();
    if (method != "all" && method != "exact" && method != "numeric" && method != "envelope") {
        throw UsageError("method must be exact, numeric, envelope or all");
    }
    rep.emplace("opnorm", std::vector<std::string>{"method", "value", "case", "converged"});
    rep->meta("spec", describe(spec));
    const std::string tag = to_string(classify(spec));
    if (method == "all" || method == "exact") {
        const auto r = embedding_norm_exact(spec);
        if (!r && method == "exact") throw UsageError("no exact form for this cell (needs p = q)");
        if (r) rep->row({"exact", r->value, tag, 1LL});
    }
    if (method == "all" || method == "numeric") {
        SearchOptions o;
        o.seed       = seed;
        const auto r = embedding_norm_numeric(spec, o);
        rep->row({"numeric", r.value, tag, r.converged ? 1LL : 0LL});
    }
    if (method == "all" || method == "envelope") {
        rep->row({"envelope", embedding_norm_envelope(spec).value, tag, 1LL});
    }
    return 0;
}

inline int cmd_sigma(Params& ps, std::optional<Report>& rep)
{
    const Vec           x  = ps.vector("x");
    const LorentzParams lp = ps.space("q", "v");
    const auto          s  = static_cast<std::size_t>(ps.count("s"));
    ps.finish();
    if (s > x.size()) throw UsageError("s exceeds the length of x");
    rep.emplace("sigma", std::vector<std::string>{"s", "sigma", "trunc_u"});
    rep->meta("target", lp.to_string());
    const Cell u = s >= 1 ? Cell{trunc_u(x, s, lp)} : Cell{std::string("n/a")};
    rep->row({static_cast<long long>(s), sigma_s(x, s, lp), u});
    return 0;
}

inline int cmd_usup(Params& ps, std::optional<Report>& rep)
{
    const EmbeddingSpec spec   = embedding(ps);
    const auto          s      = static_cast<std::size_t>(ps.count("s", std::nullopt, 1));
    const std::string   method = ps.str("method", "all");
    ps.finish();
    if (s > spec.n) throw UsageError("need s <= n");
    if (method != "all" && method != "numeric" && method != "envelope") {
        throw UsageError("method must be numeric, envelope or all");
    }
    rep.emplace("usup", std::vector<std::string>{"quantity", "method", "value"});
    rep->meta("spec", describe(spec));
    rep->meta("s", std::to_string(s));
    if (method != "envelope") {
        rep->row({"u_sup", "numeric", u_sup(spec, s, SupMethod::numeric)->value});
        rep->row({"sigma_sup", "numeric", sigma_sup(spec, s, SupMethod::numeric)->value});
    }
    if (method != "numeric") {
        const bool in_range = static_cast<double>(s) < static_cast<double>(spec.n) / std::log(3.0);
        const auto env      = in_range ? u_sup(spec, s, SupMethod::envelope) : std::nullopt;
        rep->row({"u_sup", "envelope", env ? Cell{env->value} : Cell{std::string("n/a")}});
        const auto st = sterm_bound(spec, s);
        rep->row({"sterm_bound", "envelope", st ? Cell{*st} : Cell{std::string("n/a")}});
    }
    return 0;
}

inline int cmd_envelope(Params& ps, std::optional<Report>& rep)
{
    const EmbeddingSpec spec = embedding(ps);
    const auto          kmin = ps.count("kmin", 1, 1);
    const auto          kmax = ps.count("kmax", 4 * spec.n, 1);
    ps.finish();
    if (kmin > kmax) throw UsageError("need kmin <= kmax");
    if (kmax - kmin > 10'000'000) throw UsageError("k range too long");
    rep.emplace("envelope", std::vector<std::string>{"k", "value", "case", "regime"});
    rep->meta("spec", describe(spec));
    for (std::uint64_t k = kmin; k <= kmax; ++k) {
        const EnvelopeValue e = envelope_lorentz(spec, static_cast<std::size_t>(k));
        rep->row({static_cast<long long>(k), e.value, std::string(to_string(e.tag)), std::string(to_string(e.regime))});
    }
    return 0;
}

inline int cmd_volume(Params& ps, std::optional<Report>& rep, std::ostream& err)
{
    const LorentzParams lp      = ps.space("p", "u");
    const auto          n       = static_cast<std::size_t>(ps.count("n", std::nullopt, 1));
    const auto          samples = ps.count("samples", 1'000'000, 1);
    const auto          seed    = ps.count("seed", 0);
    ps.finish();
    if (n > 12) err << "warning: hit-or-miss acceptance degrades quickly beyond n=12\n";
    const McEstimate est   = lorentz_ball_volume_mc(lp, n, samples, seed);
    const auto       exact = lorentz_ball_volume_exact(lp, n);
    rep.emplace("volume", std::vector<std::string>{"n", "mc", "std_error", "hits", "samples", "exact",
                                                        "root_over_envelope"});
    rep->meta("space", lp.to_string());
    rep->meta("seed", std::to_string(seed));
    rep->meta("enclosure", est.enclosure.is_infinite() ? "cube" : "l_" + est.enclosure.to_string());
    const double root = est.hits ? std::pow(est.mean, 1.0 / static_cast<double>(n)) / volume_envelope(lp, n) : 0.0;
    rep->row({static_cast<long long>(n), est.mean, est.std_error, static_cast<long long>(est.hits),
              static_cast<long long>(samples), exact ? Cell{*exact} : Cell{std::string("n/a")}, root});
    return 0;
}

inline int cmd_entropy_bounds(Params& ps, std::optional<Report>& rep)
{
    const EmbeddingSpec spec    = embedding(ps);
    const auto          kmax    = ps.count("kmax", 3 * spec.n, 1);
    const auto          samples = ps.count("samples", 1'000'000, 1);
    const auto          seed    = ps.count("seed", 0);
    ps.finish();
    if (spec.n > 4) throw UsageError("entropy-bounds needs n <= 4");
    if (kmax > 16) throw UsageError("entropy-bounds needs kmax <= 16");
    const RvValue r = rv(spec.source, spec.target, spec.n, RvMethod::exact_when_available, samples, seed);
    std::optional<double> p_ar;
    if (spec.source == spec.target) {
        p_ar = spec.source.is_norm() ? 1.0 : quasi_constant_estimate(spec.source, spec.n, 20'000, seed).p_ar;
    }
    rep.emplace("entropy-bounds", std::vector<std::string>{"k", "volume_lower", "packing_lower", "lower",
                                                                "covering_upper", "identity_upper", "envelope",
                                                                "case", "regime"});
    rep->meta("spec", describe(spec));
    rep->meta("rv", format_number(r.value));
    rep->meta("rv_std_error", format_number(r.std_error));
    for (std::uint64_t kk = 1; kk <= kmax; ++kk) {
        const auto          k    = static_cast<std::size_t>(kk);
        const double        vol  = entropy_vol_lower(k, spec.n, r.value);
        const PackingResult pack = packing_lower(spec, k, PackingOptions{20000, seed});
        const auto          cov  = covering_upper(spec, k);
        const EnvelopeValue env  = envelope_lorentz(spec, k);
        rep->row({static_cast<long long>(k), vol, pack.bound, std::max(vol, pack.bound),
                  cov ? Cell{cov->radius} : Cell{std::string("n/a")},
                  p_ar ? Cell{upper_identity(*p_ar, spec.n, k)} : Cell{std::string("n/a")}, env.value,
                  std::string(to_string(env.tag)), std::string(to_string(env.regime))});
    }
    return 0;
}

inline int cmd_kfunc(Params& ps, std::optional<Report>& rep)
{
    const Vec           x  = ps.vector("x");
    const double        t  = ps.real("t");
    const LorentzParams x0 = {ps.exponent("p0", "1"), ps.exponent("u0", ps.has("p0") ? ps.str("p0") : "1")};
    const LorentzParams x1 = {ps.exponent("p1", "inf"), ps.exponent("u1", ps.has("p1") ? ps.str("p1") : "inf")};
    const std::string   method = ps.str("method", "auto");
    ps.finish();
    if (!(t > 0.0)) throw UsageError("t must be > 0");
    if (method != "auto" && method != "numeric") throw UsageError("method must be auto or numeric");
    const InterpPair pair{x0, x1, x.size()};
    const KResult    r = method == "numeric" ? k_functional_numeric(x, t, pair) : k_functional(x, t, pair);
    rep.emplace("kfunc", std::vector<std::string>{"t", "value", "method", "heuristic"});
    rep->meta("couple", "l" + x0.to_string() + ",l" + x1.to_string());
    const bool closed = method == "auto" && pair.is_l1_linf();
    rep->row({t, r.value, std::string(closed ? "closed-form" : "numeric"), r.heuristic ? 1LL : 0LL});
    return 0;
}

inline int cmd_verify(Params& ps, std::optional<Report>& rep)
{
    const std::string suite = ps.str("suite", "all");
    const auto        seed  = ps.count("seed", 42);
    ps.finish();
    const std::vector<int> ids = suite_members(suite);
    rep.emplace("verify", std::vector<std::string>{"criterion", "kind", "name", "value"});
    rep->meta("suite", suite);
    rep->meta("seed", std::to_string(seed));
    bool ok = true;
    for (int id : ids) {
        const CriterionReport r = verify_criterion(id, VerifyOptions{seed});
        ok                      = ok && r.passed;
        rep->row({static_cast<long long>(id), "status", r.title, std::string(r.passed ? "pass" : "fail")});
        rep->row({static_cast<long long>(id), "checks", r.title, static_cast<long long>(r.checks)});
        rep->row({static_cast<long long>(id), "failures", r.title, static_cast<long long>(r.failures)});
        for (const auto& m : r.measured) rep->row({static_cast<long long>(id), "measured", m.name, m.value});
        for (const auto& n : r.notes) rep->row({static_cast<long long>(id), "note", n, std::string()});
    }
    return ok ? 0 : 1;
}

inline void error_record(std::ostream& err, const std::string& command, const std::string& kind, const std::string& msg)
{
    err << nlohmann::ordered_json{{"error", kind}, {"command", command}, {"message", msg}}.dump() << '\n';
}

} // namespace detail

inline constexpr const char* usage_text =
    "usage: lorentz_cli <command> key=value ...\n"
    "commands: norm opnorm sigma usup envelope volume entropy-bounds kfunc verify\n"
    "common keys: format=csv|json output=<path>; exponents accept 'inf'\n";

///
/// Runs one command. Exit status: 0 on success, 1 when verification checks
/// fail, 2 on invalid arguments, 3 when a computation fails.
///
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::string command = args.empty() ? "" : args[0];
    try {
        if (command == "help" || command == "--help" || command == "-h") {
            out << usage_text;
            return 0;
        }
        const ExperimentConfig cfg = parse_args(args);
        detail::Params         ps(cfg.params);
        std::optional<Report>  rep;
        int                    status = 0;
        if (cfg.command == "norm") status = detail::cmd_norm(ps, rep);
        else if (cfg.command == "opnorm") status = detail::cmd_opnorm(ps, rep);
        else if (cfg.command == "sigma") status = detail::cmd_sigma(ps, rep);
        else if (cfg.command == "usup") status = detail::cmd_usup(ps, rep);
        else if (cfg.command == "envelope") status = detail::cmd_envelope(ps, rep);
        else if (cfg.command == "volume") status = detail::cmd_volume(ps, rep, err);
        else if (cfg.command == "entropy-bounds") status = detail::cmd_entropy_bounds(ps, rep);
        else if (cfg.command == "kfunc") status = detail::cmd_kfunc(ps, rep);
        else if (cfg.command == "verify") status = detail::cmd_verify(ps, rep);
        else throw UsageError("unknown command '" + cfg.command + "'");

        if (cfg.output.empty()) {
            rep->write(out, cfg.format);
        } else {
            std::ofstream file(cfg.output, std::ios::binary);
            if (!file) throw std::runtime_error("cannot open '" + cfg.output + "' for writing");
            rep->write(file, cfg.format);
            if (!file) throw std::runtime_error("write to '" + cfg.output + "' failed");
        }
        return status;
    } catch (const UsageError& e) {
        detail::error_record(err, command, "invalid_argument", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        detail::error_record(err, command, "invalid_argument", e.what());
        return 2;
    } catch (const std::exception& e) {
        detail::error_record(err, command, "computation_failed", e.what());
        return 3;
    }
}

} // namespace lorentz::cli

#endif
