// htelog — anonymize event logs with Haar-transform encryption, inspect the
// transform matrices, simulate multi-organization key sharing, and reproduce
// the operation-count comparisons against Walsh-Hadamard and Paillier.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "htelog/bench.hpp"
#include "htelog/encrypted_log.hpp"
#include "htelog/error.hpp"
#include "htelog/eventlog.hpp"
#include "htelog/paillier.hpp"
#include "htelog/scenario.hpp"
#include "htelog/transform.hpp"

namespace {

using htelog::IoError;
using htelog::ValidationError;

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("HTELOG_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ValidationError("HTELOG_SEED is not an integer");
        }
    }
    return std::random_device{}();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path);
    out << text;
}

mpz_class parse_bigint(const std::string& text, const char* what) {
    try {
        return mpz_class(text);
    } catch (const std::invalid_argument&) {
        throw ValidationError(std::string(what) + " is not a decimal integer: \"" + text + "\"");
    }
}

htelog::TransformMatrix build_matrix(const std::string& kind, int l) {
    if (kind == "haar") return htelog::build_haar_normalized(l);
    if (kind == "haar-raw") return htelog::build_haar_unnormalized(l);
    if (kind == "wh") return htelog::build_walsh_hadamard(l);
    throw ValidationError("unknown matrix kind: \"" + kind + "\"");
}

std::string format_matrix(const htelog::TransformMatrix& m, const std::string& format) {
    std::vector<std::string> cells(m.n() * m.n());
    std::size_t width = 0;
    for (std::size_t r = 0; r < m.n(); ++r)
        for (std::size_t c = 0; c < m.n(); ++c) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.12g", m.entry(r, c));
            cells[r * m.n() + c] = buf;
            width = std::max(width, cells[r * m.n() + c].size());
        }
    std::ostringstream out;
    for (std::size_t r = 0; r < m.n(); ++r) {
        for (std::size_t c = 0; c < m.n(); ++c) {
            const auto& cell = cells[r * m.n() + c];
            if (format == "csv") {
                if (c) out << ',';
                out << cell;
            } else {
                if (c) out << ' ';
                out << std::string(width - cell.size(), ' ') << cell;
            }
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::ordered_json keypair_to_json(const htelog::paillier::Keypair& kp) {
    nlohmann::ordered_json j;
    j["j"] = kp.j.get_str();
    j["k"] = kp.k.get_str();
    j["n"] = kp.n.get_str();
    j["g"] = kp.g.get_str();
    j["lambda"] = kp.lambda.get_str();
    j["nu"] = kp.nu.get_str();
    return j;
}

htelog::paillier::Keypair load_keypair(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open keypair file: " + path);
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("cannot parse keypair file: ") + e.what());
    }
    // re-derive through keygen so invalid files are rejected
    return htelog::paillier::keygen_explicit(parse_bigint(j.at("j"), "j"),
                                             parse_bigint(j.at("k"), "k"),
                                             parse_bigint(j.at("g"), "g"));
}

int run(int argc, char** argv) {
    CLI::App app{"event-log anonymization with Haar-transform encryption"};
    app.require_subcommand(1);

    // keygen
    auto* keygen = app.add_subcommand("keygen", "generate HTE/WHE keys");
    std::vector<std::string> key_ids;
    std::string key_owner, key_out;
    std::vector<std::string> granted;
    std::optional<std::uint64_t> keygen_seed;
    keygen->add_option("--id", key_ids, "key id (repeatable)")->required();
    keygen->add_option("--owner", key_owner, "owning organization")->required();
    keygen->add_option("--granted-to", granted, "organizations granted every key");
    keygen->add_option("--out", key_out, "output key file (default: stdout)");
    keygen->add_option("--seed", keygen_seed, "seed for reproducible keys");

    // matrix
    auto* matrix = app.add_subcommand("matrix", "print a transform matrix");
    std::string matrix_kind = "haar", matrix_format = "text";
    int matrix_l = 3;
    matrix->add_option("--kind", matrix_kind, "haar | haar-raw | wh")
        ->check(CLI::IsMember({"haar", "haar-raw", "wh"}));
    matrix->add_option("--l", matrix_l, "log2 of the matrix order")->required();
    matrix->add_option("--format", matrix_format, "csv | text")
        ->check(CLI::IsMember({"csv", "text"}));

    // encrypt
    auto* encrypt = app.add_subcommand("encrypt", "encrypt a plaintext CSV log");
    std::string enc_log, enc_schema, enc_keys, enc_out;
    encrypt->add_option("--log", enc_log, "plaintext CSV")->required();
    encrypt->add_option("--schema", enc_schema, "column schema JSON")->required();
    encrypt->add_option("--keys", enc_keys, "key file JSON")->required();
    encrypt->add_option("--out", enc_out, "encrypted log output (default: stdout)");

    // decrypt
    auto* decrypt = app.add_subcommand("decrypt", "decrypt an encrypted log to CSV");
    std::string dec_enc, dec_keys, dec_out;
    decrypt->add_option("--enc", dec_enc, "encrypted log JSON")->required();
    decrypt->add_option("--keys", dec_keys, "key file JSON")->required();
    decrypt->add_option("--out", dec_out, "CSV output (default: stdout)");

    // view
    auto* view = app.add_subcommand("view", "per-organization partial decryption");
    std::string view_enc, view_keys, view_org, view_role = "intermediate-untrusted", view_out;
    view->add_option("--enc", view_enc, "encrypted log JSON")->required();
    view->add_option("--keys", view_keys, "key file JSON")->required();
    view->add_option("--org", view_org, "organization id")->required();
    view->add_option("--role", view_role, "organization role label");
    view->add_option("--out", view_out, "view output (default: stdout)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a multi-organization scenario");
    std::string sim_scenario, sim_out;
    std::optional<std::uint64_t> sim_seed;
    simulate->add_option("--scenario", sim_scenario, "scenario JSON")->required();
    simulate->add_option("--out", sim_out, "transcript output (default: stdout)");
    simulate->add_option("--seed", sim_seed, "seed (simulation itself is deterministic)");

    // paillier
    auto* paillier = app.add_subcommand("paillier", "Paillier reference tools");
    paillier->require_subcommand(1);
    auto* pk = paillier->add_subcommand("keygen", "generate a keypair");
    std::optional<std::string> pk_j, pk_k, pk_g;
    unsigned pk_bits = 32;
    std::optional<std::uint64_t> pk_seed;
    std::string pk_out;
    pk->add_option("--j", pk_j, "explicit prime j");
    pk->add_option("--k", pk_k, "explicit prime k");
    pk->add_option("--g", pk_g, "explicit generator g");
    pk->add_option("--bits", pk_bits, "modulus size for random mode");
    pk->add_option("--seed", pk_seed, "seed for random mode");
    pk->add_option("--out", pk_out, "keypair output (default: stdout)");

    auto* pe = paillier->add_subcommand("encrypt", "encrypt one number");
    std::string pe_keypair, pe_x, pe_out;
    std::optional<std::string> pe_r;
    std::optional<std::uint64_t> pe_seed;
    pe->add_option("--keypair", pe_keypair, "keypair JSON")->required();
    pe->add_option("--x", pe_x, "plaintext in [0, n)")->required();
    pe->add_option("--r", pe_r, "fixed randomness in Z*_n (deterministic mode)");
    pe->add_option("--seed", pe_seed, "seed when r is drawn");
    pe->add_option("--out", pe_out, "output (default: stdout)");

    auto* pd = paillier->add_subcommand("decrypt", "decrypt one ciphertext");
    std::string pd_keypair, pd_c;
    pd->add_option("--keypair", pd_keypair, "keypair JSON")->required();
    pd->add_option("--c", pd_c, "ciphertext")->required();

    auto* pa = paillier->add_subcommand("add", "homomorphic ciphertext addition");
    std::string pa_keypair, pa_c1, pa_c2;
    pa->add_option("--keypair", pa_keypair, "keypair JSON")->required();
    pa->add_option("--c1", pa_c1, "first ciphertext")->required();
    pa->add_option("--c2", pa_c2, "second ciphertext")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "operation-count sweeps");
    std::string bench_scheme = "all", bench_out;
    int bench_lmin = 2, bench_lmax = 8;
    std::optional<std::uint64_t> bench_seed;
    bench->add_option("--scheme", bench_scheme, "hte | whe | phe | all")
        ->check(CLI::IsMember({"hte", "whe", "phe", "all"}));
    bench->add_option("--l-min", bench_lmin, "smallest log2 order");
    bench->add_option("--l-max", bench_lmax, "largest log2 order");
    bench->add_option("--seed", bench_seed, "seed for PHE data");
    bench->add_option("--out", bench_out, "CSV output (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (keygen->parsed()) {
        std::mt19937_64 rng(resolve_seed(keygen_seed));
        std::uniform_real_distribution<double> dist(1.0, 1000.0);
        htelog::KeyRing ring;
        for (const auto& id : key_ids) {
            htelog::KeyRecord record;
            record.key_id = id;
            record.owner = key_owner;
            record.value = dist(rng);
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", record.value);
            record.expression = buf;
            record.granted_to.insert(granted.begin(), granted.end());
            ring.insert(std::move(record));
        }
        write_output(key_out, ring.dump());
    } else if (matrix->parsed()) {
        write_output("", format_matrix(build_matrix(matrix_kind, matrix_l), matrix_format));
    } else if (encrypt->parsed()) {
        const auto schema = htelog::LogSchema::load(enc_schema);
        const auto keys = htelog::KeyRing::load(enc_keys);
        const auto log = htelog::load_log(std::filesystem::path(enc_log), schema);
        const auto enc = htelog::encrypt_log(log, keys);
        write_output(enc_out, enc.to_json().dump(2) + "\n");
    } else if (decrypt->parsed()) {
        const auto enc = htelog::EncryptedLog::load(dec_enc);
        const auto keys = htelog::KeyRing::load(dec_keys);
        const auto log = htelog::decrypt_log(enc, keys);
        std::ostringstream out;
        htelog::save_log_csv(out, log);
        write_output(dec_out, out.str());
    } else if (view->parsed()) {
        const auto enc = htelog::EncryptedLog::load(view_enc);
        const auto keys = htelog::KeyRing::load(view_keys);
        htelog::Organization org{view_org, htelog::role_from_string(view_role)};
        write_output(view_out, htelog::org_view(enc, org, keys).dump(2) + "\n");
    } else if (simulate->parsed()) {
        resolve_seed(sim_seed);  // accepted for interface symmetry; the run is deterministic
        write_output(sim_out, htelog::run_scenario(sim_scenario).dump(2) + "\n");
    } else if (pk->parsed()) {
        htelog::paillier::Keypair kp;
        if (pk_j || pk_k || pk_g) {
            if (!(pk_j && pk_k && pk_g))
                throw ValidationError("explicit mode needs --j, --k and --g together");
            kp = htelog::paillier::keygen_explicit(parse_bigint(*pk_j, "j"),
                                                   parse_bigint(*pk_k, "k"),
                                                   parse_bigint(*pk_g, "g"));
        } else {
            std::mt19937_64 rng(resolve_seed(pk_seed));
            kp = htelog::paillier::keygen_random(pk_bits, rng);
        }
        write_output(pk_out, keypair_to_json(kp).dump(2) + "\n");
    } else if (pe->parsed()) {
        const auto kp = load_keypair(pe_keypair);
        std::mt19937_64 rng(resolve_seed(pe_seed));
        std::optional<mpz_class> r;
        if (pe_r) r = parse_bigint(*pe_r, "r");
        const auto c = htelog::paillier::encrypt(parse_bigint(pe_x, "x"), kp, r, &rng);
        nlohmann::ordered_json j;
        j["ciphertext"] = c.value.get_str();
        j["r"] = c.r_used.get_str();
        write_output(pe_out, j.dump(2) + "\n");
    } else if (pd->parsed()) {
        const auto kp = load_keypair(pd_keypair);
        write_output("", htelog::paillier::decrypt_value(parse_bigint(pd_c, "c"), kp).get_str() +
                             "\n");
    } else if (pa->parsed()) {
        const auto kp = load_keypair(pa_keypair);
        htelog::paillier::Ciphertext c1{parse_bigint(pa_c1, "c1"), kp.n, 0};
        htelog::paillier::Ciphertext c2{parse_bigint(pa_c2, "c2"), kp.n, 0};
        write_output("", htelog::paillier::homomorphic_add(c1, c2, kp).value.get_str() + "\n");
    } else if (bench->parsed()) {
        std::vector<htelog::bench::BenchRow> rows;
        if (bench_scheme == "hte" || bench_scheme == "whe" || bench_scheme == "all") {
            for (auto& row : htelog::bench::sweep_fig2(bench_lmin, bench_lmax))
                if (bench_scheme == "all" || row.scheme == bench_scheme)
                    rows.push_back(std::move(row));
        }
        if (bench_scheme == "phe" || bench_scheme == "all") {
            const std::uint64_t seed = resolve_seed(bench_seed);
            for (auto& row : htelog::bench::sweep_phe(bench_lmin, bench_lmax, 22, seed))
                rows.push_back(std::move(row));
        }
        write_output(bench_out, htelog::bench::to_csv(rows));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
