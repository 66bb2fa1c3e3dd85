#include "taea/config.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "taea/csv.hpp"

namespace taea {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

KeyValueMap parse_key_values(const std::string& text) {
    KeyValueMap map;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value, got '" + t + "'");
        map[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return map;
}

KeyValueMap load_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

namespace {

struct Field {
    const char* key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

double to_double(const std::string& v) {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("bad number: " + v);
    return d;
}

int to_int(const std::string& v) {
    std::size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument("bad integer: " + v);
    return i;
}

std::uint64_t to_u64(const std::string& v) {
    std::size_t used = 0;
    const unsigned long long u = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("bad integer: " + v);
    return u;
}

#define DOUBLE_FIELD(key, member)                                           \
    Field{key, [](RunConfig& c, const std::string& v) { c.member = to_double(v); }, \
          [](const RunConfig& c) { return fmt_double(c.member); }}
#define INT_FIELD(key, member)                                              \
    Field{key, [](RunConfig& c, const std::string& v) { c.member = to_int(v); },   \
          [](const RunConfig& c) { return std::to_string(c.member); }}

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        Field{"run.problem",
              [](RunConfig& c, const std::string& v) { c.problem = v; },
              [](const RunConfig& c) { return c.problem; }},
        INT_FIELD("run.m", num_objectives),
        INT_FIELD("run.d", dimension),
        INT_FIELD("run.pop", population_size),
        INT_FIELD("run.gens", max_generations),
        Field{"run.seed",
              [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); },
              [](const RunConfig& c) { return std::to_string(c.seed); }},
        Field{"run.algo",
              [](RunConfig& c, const std::string& v) { c.algorithm = parse_algorithm(v); },
              [](const RunConfig& c) { return algorithm_name(c.algorithm); }},
        INT_FIELD("run.metric_cadence", metric_cadence),
        INT_FIELD("run.convergence_groups", convergence_groups),

        DOUBLE_FIELD("trust.tau_s", trust.tau_s),
        DOUBLE_FIELD("trust.tau_e", trust.tau_e),
        DOUBLE_FIELD("trust.mu", trust.mu),
        INT_FIELD("trust.bins", trust.bins),
        DOUBLE_FIELD("trust.kappa", trust.kappa),
        DOUBLE_FIELD("trust.alpha", trust.alpha),
        DOUBLE_FIELD("trust.beta", trust.beta),
        DOUBLE_FIELD("trust.gamma", trust.gamma),
        DOUBLE_FIELD("trust.p_min", trust.p_min),
        DOUBLE_FIELD("trust.p_max", trust.p_max),
        DOUBLE_FIELD("trust.lambda_exp", trust.lambda_exp),
        INT_FIELD("trust.k_min", trust.k_min),
        INT_FIELD("trust.k_max", trust.k_max),
        DOUBLE_FIELD("trust.rho_min", trust.rho_min),
        DOUBLE_FIELD("trust.rho_max", trust.rho_max),

        DOUBLE_FIELD("sparse.f", reproduction.f),
        DOUBLE_FIELD("sparse.cr", reproduction.cr),
        DOUBLE_FIELD("sparse.lambda", reproduction.lambda),
        DOUBLE_FIELD("sparse.omega0", reproduction.omega0),
        DOUBLE_FIELD("sparse.omega1", reproduction.omega1),
        DOUBLE_FIELD("sparse.omega2", reproduction.omega2),
        DOUBLE_FIELD("sparse.elite_fraction", reproduction.elite_fraction),

        DOUBLE_FIELD("probe.p_start", probe.p_start),
        DOUBLE_FIELD("probe.delta0", probe.delta0),
        DOUBLE_FIELD("probe.delta1", probe.delta1),
        DOUBLE_FIELD("probe.delta2", probe.delta2),
        DOUBLE_FIELD("probe.delta_max", probe.delta_max),
        DOUBLE_FIELD("probe.beta_lo", probe.beta_lo),
        DOUBLE_FIELD("probe.beta_hi", probe.beta_hi),
        Field{"probe.rho_mode",
              [](RunConfig& c, const std::string& v) {
                  if (v == "rho") c.probe.rho_probe_follows_rho = true;
                  else if (v == "fixed") c.probe.rho_probe_follows_rho = false;
                  else throw std::invalid_argument("probe.rho_mode must be 'rho' or 'fixed'");
              },
              [](const RunConfig& c) {
                  return std::string(c.probe.rho_probe_follows_rho ? "rho" : "fixed");
              }},
        DOUBLE_FIELD("probe.rho_fixed", probe.rho_probe_fixed),

        DOUBLE_FIELD("ckpt.lambda_d", checkpoint.lambda_d),
        DOUBLE_FIELD("ckpt.lambda_c", checkpoint.lambda_c),
        DOUBLE_FIELD("ckpt.lambda_n", checkpoint.lambda_n),
        DOUBLE_FIELD("ckpt.eta_gamma", checkpoint.eta_gamma),
        DOUBLE_FIELD("ckpt.eta_r", checkpoint.eta_r),
        DOUBLE_FIELD("ckpt.tau_b", checkpoint.tau_b),
        DOUBLE_FIELD("ckpt.gamma_r", checkpoint.gamma_r),
        DOUBLE_FIELD("ckpt.gamma_gamma", checkpoint.gamma_gamma),
    };
    return f;
}

#undef DOUBLE_FIELD
#undef INT_FIELD

} // namespace

void apply_settings(RunConfig& config, const KeyValueMap& settings) {
    for (const auto& [key, value] : settings) {
        bool found = false;
        for (const auto& f : fields()) {
            if (key == f.key) {
                f.set(config, value);
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("unknown config key: " + key);
    }
}

std::string serialize_config(const RunConfig& config) {
    std::ostringstream out;
    for (const auto& f : fields()) out << f.key << '=' << f.get(config) << '\n';
    return out.str();
}

RunConfig config_from_settings(const KeyValueMap& settings) {
    RunConfig config;
    apply_settings(config, settings);
    return config;
}

namespace {

// SHA-1, single-shot
std::string sha1_hex(const std::string& data) {
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
    std::string msg = data;
    const std::uint64_t bit_len = static_cast<std::uint64_t>(msg.size()) * 8;
    msg.push_back(static_cast<char>(0x80));
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i)
        msg.push_back(static_cast<char>((bit_len >> (8 * i)) & 0xFF));

    auto rotl = [](std::uint32_t v, int s) { return (v << s) | (v >> (32 - s)); };
    for (std::size_t chunk = 0; chunk < msg.size(); chunk += 64) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i) {
            w[i] = (static_cast<std::uint8_t>(msg[chunk + 4 * i]) << 24) |
                   (static_cast<std::uint8_t>(msg[chunk + 4 * i + 1]) << 16) |
                   (static_cast<std::uint8_t>(msg[chunk + 4 * i + 2]) << 8) |
                   static_cast<std::uint8_t>(msg[chunk + 4 * i + 3]);
        }
        for (int i = 16; i < 80; ++i)
            w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) { f = (b & c) | (~b & d); k = 0x5A827999u; }
            else if (i < 40) { f = b ^ c ^ d; k = 0x6ED9EBA1u; }
            else if (i < 60) { f = (b & c) | (b & d) | (c & d); k = 0x8F1BBCDCu; }
            else { f = b ^ c ^ d; k = 0xCA62C1D6u; }
            const std::uint32_t tmp = rotl(a, 5) + f + e + k + w[i];
            e = d; d = c; c = rotl(b, 30); b = a; a = tmp;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d; h[4] += e;
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (std::uint32_t v : h)
        for (int i = 7; i >= 0; --i) out.push_back(hex[(v >> (4 * i)) & 0xF]);
    return out;
}

} // namespace

std::string content_hash(const std::string& content) {
    return sha1_hex("blob " + std::to_string(content.size()) + '\0' + content);
}

std::string write_manifest(const RunConfig& config) {
    const std::string body = serialize_config(config);
    return "# config_sha1=" + content_hash(body) + "\n" + body;
}

} // namespace taea
