#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "calign/dataset.hpp"
#include "calign/embed.hpp"
#include "calign/graph.hpp"
#include "calign/kernel.hpp"
#include "calign/laplacian.hpp"
#include "calign/plot.hpp"
#include "calign/sne.hpp"
#include "calign/verify.hpp"

namespace calign::cli {

namespace {

using nlohmann::json;

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_level() {
    const char* env = std::getenv("COUPLED_ALIGN_LOG");
    if (!env) return LogLevel::Warn;
    const std::string v(env);
    if (v == "error") return LogLevel::Error;
    if (v == "warn") return LogLevel::Warn;
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

void log(LogLevel lvl, const std::string& msg) {
    static const LogLevel active = log_level();
    if (lvl > active) return;
    const char* tag[] = {"error", "warn", "info", "debug"};
    std::cerr << "[" << tag[static_cast<int>(lvl)] << "] " << msg << "\n";
}

// config file values act as defaults; explicit flags always win
struct ConfigDefaults {
    json values;

    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open config '" + path + "'");
        try {
            in >> values;
        } catch (const json::exception& e) {
            throw DataError("config '" + path + "': " + e.what());
        }
        if (!values.is_object()) throw DataError("config '" + path + "' must be a JSON object");
    }

    template <typename T>
    void apply(CLI::App* sub, const std::string& flag, T* var) const {
        if (values.is_null() || !values.contains(flag)) return;
        const CLI::Option* opt = sub->get_option("--" + flag);
        if (opt->count() > 0) return;
        try {
            *var = values.at(flag).get<T>();
        } catch (const json::exception& e) {
            throw InvalidArgument("config key '" + flag + "': " + e.what());
        }
    }
};

double median_sq_distance(const RealMatrix& x) {
    std::vector<double> d2;
    d2.reserve(x.rows() * (x.rows() - 1) / 2);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = i + 1; j < x.rows(); ++j) d2.push_back(row_dist_sq(x, i, j));
    if (d2.empty()) return 1.0;
    std::sort(d2.begin(), d2.end());
    const double med = d2[d2.size() / 2];
    return med > 0.0 ? med : 1.0;
}

struct GraphFlags {
    std::string method = "knn";
    std::size_t k = 10;
    double eps = 1.0;
    std::string weights = "heat";
    double t = 0.0; // 0: median squared pairwise distance of the dataset
};

void add_graph_flags(CLI::App* sub, GraphFlags* g) {
    sub->add_option("--method", g->method, "neighborhood rule: knn or epsilon")
        ->check(CLI::IsMember({"knn", "epsilon"}));
    sub->add_option("--k", g->k, "neighbour count for knn");
    sub->add_option("--eps", g->eps, "radius for epsilon");
    sub->add_option("--weights", g->weights, "edge weights: heat or simple")
        ->check(CLI::IsMember({"heat", "simple"}));
    sub->add_option("--t", g->t, "heat kernel t; 0 picks the median squared distance");
}

void apply_graph_config(const ConfigDefaults& cfg, CLI::App* sub, GraphFlags* g) {
    cfg.apply(sub, "method", &g->method);
    cfg.apply(sub, "k", &g->k);
    cfg.apply(sub, "eps", &g->eps);
    cfg.apply(sub, "weights", &g->weights);
    cfg.apply(sub, "t", &g->t);
}

WeightMatrix weights_for(const Dataset& data, const GraphFlags& g) {
    GraphConfig cfg;
    cfg.method = g.method == "epsilon" ? NeighborRule::EpsilonNeighborhood
                                       : NeighborRule::KNearest;
    cfg.epsilon = g.eps;
    cfg.k = g.k;
    cfg.weighting = g.weights == "simple" ? WeightRule::Simple : WeightRule::HeatKernel;
    cfg.heat_t = g.t;
    if (cfg.weighting == WeightRule::HeatKernel && cfg.heat_t == 0.0) {
        cfg.heat_t = median_sq_distance(data.features);
        log(LogLevel::Info, "heat t auto-set to " + format_double(cfg.heat_t));
    }
    if (cfg.weighting == WeightRule::HeatKernel && cfg.heat_t < 0.0)
        log(LogLevel::Warn, "negative heat t: weights exceed 1");
    validate(cfg, data.size());
    return build_weights(data, cfg);
}

struct CouplingFlags {
    double alpha = 0.5;
    double eta = 0.5;
};

void add_coupling_flags(CLI::App* sub, CouplingFlags* c) {
    sub->add_option("--alpha", c->alpha, "real coupling weight, beta = 1 - alpha")
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
    sub->add_option("--eta", c->eta, "dataset-1 blend weight, mu = 1 - eta")
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
}

struct PipelineInputs {
    Dataset x1, x2;
    CoupledGraph graph;
    GenLaplacian laplacian;
    std::shared_ptr<Spectrum> spectrum;
};

PipelineInputs build_pipeline(const std::string& x1_path, const std::string& x2_path,
                              const GraphFlags& gf, const CouplingFlags& cf) {
    PipelineInputs p;
    p.x1 = load_dataset_csv(x1_path);
    p.x2 = load_dataset_csv(x2_path);
    if (p.x1.size() != p.x2.size())
        throw InvalidArgument("the two datasets must contain the same number of points");
    const WeightMatrix w1 = weights_for(p.x1, gf);
    const WeightMatrix w2 = weights_for(p.x2, gf);
    p.graph = coupled_weight(w1, w2, cf.eta, 1.0 - cf.eta, cf.alpha, 1.0 - cf.alpha);
    p.laplacian = build_laplacian(p.graph);
    p.spectrum = std::make_shared<Spectrum>(generalized_spectrum(p.laplacian));
    log(LogLevel::Info, "spectrum: null_dim=" + std::to_string(p.spectrum->null_dim) +
                            " xi=" + std::to_string(p.spectrum->xi));
    return p;
}

std::string trace_csv(const std::vector<double>& trace) {
    std::ostringstream out;
    out << "iter,objective\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << i << "," << format_double(trace[i]) << "\n";
    return out.str();
}

std::string weights_csv(const Dataset& data, const WeightMatrix& wm) {
    std::ostringstream out;
    out << "id";
    for (const auto& id : data.ids) out << "," << id;
    out << "\n";
    for (std::size_t i = 0; i < wm.size(); ++i) {
        out << data.ids[i];
        for (std::size_t j = 0; j < wm.size(); ++j) out << "," << format_double(wm.w(i, j));
        out << "\n";
    }
    return out.str();
}

std::string latent_csv(const KernelModel& model, const std::vector<std::string>& ids1,
                       const std::vector<std::string>& ids2) {
    const CMatrix z1 = model.latent1();
    const CMatrix z2 = model.latent2();
    const std::size_t p = model.latent_dim;
    const bool complex_out = z1.imag_part().frobenius_norm() > 1e-12 ||
                             z2.imag_part().frobenius_norm() > 1e-12;
    std::ostringstream out;
    out << "id,dataset";
    for (std::size_t c = 0; c < p; ++c) {
        if (complex_out)
            out << ",c" << (c + 1) << "_re,c" << (c + 1) << "_im";
        else
            out << ",c" << (c + 1);
    }
    out << "\n";
    auto emit = [&](const CMatrix& z, const std::vector<std::string>& ids, int tag) {
        for (std::size_t j = 0; j < z.cols(); ++j) {
            out << ids[j] << "," << tag;
            for (std::size_t c = 0; c < p; ++c) {
                out << "," << format_double(z(c, j).real());
                if (complex_out) out << "," << format_double(z(c, j).imag());
            }
            out << "\n";
        }
    };
    emit(z1, ids1, 1);
    emit(z2, ids2, 2);
    return out.str();
}

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"coupled-align: coupled spectral and kernel manifold alignment"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON file with default parameter values")
        ->expected(1);

    // ----- build-graph -----
    auto* sc_graph = app.add_subcommand("build-graph", "build a weighted neighborhood graph");
    std::string bg_data, bg_out;
    GraphFlags bg_flags;
    sc_graph->add_option("--data", bg_data, "input dataset CSV")->required();
    add_graph_flags(sc_graph, &bg_flags);
    sc_graph->add_option("--out", bg_out, "output weight-matrix CSV")->required();

    // ----- embed -----
    auto* sc_embed = app.add_subcommand("embed", "coupled spectral embedding of two datasets");
    std::string em_x1, em_x2, em_out;
    std::size_t em_dim = 2;
    bool em_include_null = false;
    GraphFlags em_graph;
    CouplingFlags em_couple;
    sc_embed->add_option("--x1", em_x1, "dataset 1 CSV")->required();
    sc_embed->add_option("--x2", em_x2, "dataset 2 CSV")->required();
    sc_embed->add_option("--dim", em_dim, "embedding dimension m");
    add_graph_flags(sc_embed, &em_graph);
    add_coupling_flags(sc_embed, &em_couple);
    sc_embed->add_flag("--include-null", em_include_null,
                       "keep the constant null eigenvector instead of skipping it");
    sc_embed->add_option("--out", em_out, "output embedding CSV")->required();

    // ----- refine -----
    auto* sc_refine = app.add_subcommand(
        "refine", "spectral embedding followed by the KL-divergence refinement");
    std::string rf_x1, rf_x2, rf_out, rf_trace_out, rf_exponent = "paper";
    std::size_t rf_dim = 2;
    GraphFlags rf_graph;
    CouplingFlags rf_couple;
    RefineConfig rf_cfg;
    sc_refine->add_option("--x1", rf_x1, "dataset 1 CSV")->required();
    sc_refine->add_option("--x2", rf_x2, "dataset 2 CSV")->required();
    sc_refine->add_option("--dim", rf_dim, "embedding dimension m");
    add_graph_flags(sc_refine, &rf_graph);
    add_coupling_flags(sc_refine, &rf_couple);
    sc_refine->add_option("--zeta", rf_cfg.zeta, "coupling penalty weight (>= 0)");
    sc_refine->add_option("--perplexity", rf_cfg.perplexity, "target perplexity (> 1)");
    sc_refine->add_option("--iters", rf_cfg.max_iters, "maximum accepted iterations");
    sc_refine->add_option("--step", rf_cfg.initial_step, "initial line-search step");
    sc_refine->add_option("--tolerance", rf_cfg.tolerance, "relative decrease stop threshold");
    sc_refine->add_option("--seed", rf_cfg.seed, "random seed");
    sc_refine->add_option("--exponent", rf_exponent, "similarity exponent: paper or squared")
        ->check(CLI::IsMember({"paper", "squared"}));
    sc_refine->add_flag("--free", rf_cfg.optimize_free,
                        "optimize Y1, Y2 without the unitary-family constraint");
    sc_refine->add_option("--out", rf_out, "output embedding CSV")->required();
    sc_refine->add_option("--trace-out", rf_trace_out, "objective trace CSV (iter,objective)");

    // ----- kernel-align -----
    auto* sc_kernel = app.add_subcommand("kernel-align", "RKHS kernel alignment of two datasets");
    std::string ka_x1, ka_x2, ka_out, ka_trace_out, ka_kernel = "rbf";
    double ka_t = 0.0, ka_offset = 1.0, ka_latent_t = 0.0;
    std::size_t ka_degree = 2;
    KernelAlignConfig ka_cfg;
    sc_kernel->add_option("--x1", ka_x1, "dataset 1 CSV (real, or _re/_im column pairs)")
        ->required();
    sc_kernel->add_option("--x2", ka_x2, "dataset 2 CSV")->required();
    sc_kernel->add_option("--dim", ka_cfg.latent_dim, "latent dimension p");
    sc_kernel->add_option("--kernel", ka_kernel, "gram kernel: rbf, linear or poly")
        ->check(CLI::IsMember({"rbf", "linear", "poly"}));
    sc_kernel->add_option("--t", ka_t, "rbf kernel t; 0 picks the median squared distance");
    sc_kernel->add_option("--degree", ka_degree, "poly kernel degree");
    sc_kernel->add_option("--offset", ka_offset, "poly kernel offset (>= 0)");
    sc_kernel->add_option("--latent-t", ka_latent_t,
                          "latent-space RBF t; 0 picks the median at initialization");
    sc_kernel->add_option("--lambda1", ka_cfg.lambda1, "distortion weight");
    sc_kernel->add_option("--lambda2", ka_cfg.lambda2, "penalty weight");
    sc_kernel->add_option("--iters", ka_cfg.max_iters, "maximum accepted iterations");
    sc_kernel->add_option("--step", ka_cfg.initial_step, "initial line-search step");
    sc_kernel->add_option("--seed", ka_cfg.seed, "random seed");
    sc_kernel->add_flag("--strict-paper-distortion", ka_cfg.strict_paper_distortion,
                        "evaluate the literal distortion operand order (square A only)");
    sc_kernel->add_option("--out", ka_out, "output latent embedding CSV")->required();
    sc_kernel->add_option("--trace-out", ka_trace_out, "objective trace CSV");

    // ----- verify -----
    auto* sc_verify = app.add_subcommand("verify", "numerically verify the spectral identities");
    std::uint64_t vf_seed = 7;
    std::size_t vf_n = 6, vf_trials = 100;
    std::string vf_out;
    sc_verify->add_option("--seed", vf_seed, "random seed");
    sc_verify->add_option("--n", vf_n, "instance size");
    sc_verify->add_option("--trials", vf_trials, "random draws per probe");
    sc_verify->add_option("--out", vf_out, "also write the report to a file");

    // ----- indicator -----
    auto* sc_ind = app.add_subcommand("indicator", "mapping indicator f(psi) of a coupled graph");
    std::string in_x1, in_x2;
    GraphFlags in_graph;
    CouplingFlags in_couple;
    sc_ind->add_option("--x1", in_x1, "dataset 1 CSV")->required();
    sc_ind->add_option("--x2", in_x2, "dataset 2 CSV")->required();
    add_graph_flags(sc_ind, &in_graph);
    add_coupling_flags(sc_ind, &in_couple);

    // ----- eval -----
    auto* sc_eval = app.add_subcommand("eval", "FOSCTTM alignment error of an embedding CSV");
    std::string ev_embed;
    sc_eval->add_option("--embed", ev_embed, "embedding CSV")->required();

    // ----- plot -----
    auto* sc_plot = app.add_subcommand("plot", "SVG scatter of an embedding CSV");
    std::string pl_embed, pl_out;
    bool pl_pairs = false;
    sc_plot->add_option("--embed", pl_embed, "embedding CSV")->required();
    sc_plot->add_option("--out", pl_out, "output SVG path")->required();
    sc_plot->add_flag("--pairs", pl_pairs, "join matched ids with line segments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e); // prints help text or the usage error
        return rc == 0 ? 0 : 2;
    }

    ConfigDefaults cfg;
    if (!config_path.empty()) cfg.load(config_path);

    if (*sc_graph) {
        apply_graph_config(cfg, sc_graph, &bg_flags);
        const Dataset data = load_dataset_csv(bg_data);
        const WeightMatrix wm = weights_for(data, bg_flags);
        degree_vector(wm); // isolated vertices are an error, surface them now
        write_file_atomic(bg_out, weights_csv(data, wm));
        log(LogLevel::Info, "wrote " + bg_out);
        return 0;
    }

    if (*sc_embed) {
        apply_graph_config(cfg, sc_embed, &em_graph);
        cfg.apply(sc_embed, "dim", &em_dim);
        cfg.apply(sc_embed, "alpha", &em_couple.alpha);
        cfg.apply(sc_embed, "eta", &em_couple.eta);
        const PipelineInputs p = build_pipeline(em_x1, em_x2, em_graph, em_couple);
        const Embedding e = spectral_embed(p.spectrum, em_dim, em_include_null);
        write_file_atomic(em_out, embedding_csv(e, p.x1.ids, p.x2.ids));
        return 0;
    }

    if (*sc_refine) {
        apply_graph_config(cfg, sc_refine, &rf_graph);
        cfg.apply(sc_refine, "dim", &rf_dim);
        cfg.apply(sc_refine, "alpha", &rf_couple.alpha);
        cfg.apply(sc_refine, "eta", &rf_couple.eta);
        cfg.apply(sc_refine, "zeta", &rf_cfg.zeta);
        cfg.apply(sc_refine, "perplexity", &rf_cfg.perplexity);
        cfg.apply(sc_refine, "iters", &rf_cfg.max_iters);
        cfg.apply(sc_refine, "step", &rf_cfg.initial_step);
        cfg.apply(sc_refine, "seed", &rf_cfg.seed);
        cfg.apply(sc_refine, "exponent", &rf_exponent);
        rf_cfg.exponent_mode =
            rf_exponent == "squared" ? ExponentMode::SquaredNorm : ExponentMode::PaperNorm;
        validate(rf_cfg);
        const PipelineInputs p = build_pipeline(rf_x1, rf_x2, rf_graph, rf_couple);
        const Embedding e = spectral_embed(p.spectrum, rf_dim);
        const RefineResult r = refine(e, p.x1, p.x2, rf_cfg);
        if (r.stalled) log(LogLevel::Warn, "refinement stalled; best iterate kept");
        if (r.on_manifold) {
            write_file_atomic(rf_out, embedding_csv(r.embedding, p.x1.ids, p.x2.ids));
        } else {
            Embedding raw;
            raw.y1 = r.y1;
            raw.y2 = r.y2;
            raw.y = CMatrix::from_parts(r.y1, r.y2);
            write_file_atomic(rf_out, embedding_csv(raw, p.x1.ids, p.x2.ids));
        }
        if (!rf_trace_out.empty()) write_file_atomic(rf_trace_out, trace_csv(r.trace));
        return 0;
    }

    if (*sc_kernel) {
        cfg.apply(sc_kernel, "dim", &ka_cfg.latent_dim);
        cfg.apply(sc_kernel, "kernel", &ka_kernel);
        cfg.apply(sc_kernel, "t", &ka_t);
        cfg.apply(sc_kernel, "latent-t", &ka_latent_t);
        cfg.apply(sc_kernel, "lambda1", &ka_cfg.lambda1);
        cfg.apply(sc_kernel, "lambda2", &ka_cfg.lambda2);
        cfg.apply(sc_kernel, "iters", &ka_cfg.max_iters);
        cfg.apply(sc_kernel, "step", &ka_cfg.initial_step);
        cfg.apply(sc_kernel, "seed", &ka_cfg.seed);
        const ComplexDataset d1 = load_complex_dataset_csv(ka_x1);
        const ComplexDataset d2 = load_complex_dataset_csv(ka_x2);

        auto spec_for = [&](const CMatrix& features) {
            KernelSpec spec;
            if (ka_kernel == "linear") {
                spec.family = KernelFamily::Linear;
            } else if (ka_kernel == "poly") {
                spec.family = KernelFamily::Polynomial;
                spec.degree = ka_degree;
                spec.offset = ka_offset;
            } else {
                spec.family = KernelFamily::GaussianRBF;
                spec.t = ka_t;
                if (spec.t == 0.0) {
                    // median squared pairwise distance of this dataset
                    std::vector<double> d2v;
                    for (std::size_t i = 0; i < features.rows(); ++i)
                        for (std::size_t j = i + 1; j < features.rows(); ++j) {
                            double s = 0.0;
                            for (std::size_t c = 0; c < features.cols(); ++c)
                                s += std::norm(features(i, c) - features(j, c));
                            d2v.push_back(s);
                        }
                    std::sort(d2v.begin(), d2v.end());
                    spec.t = d2v.empty() || d2v[d2v.size() / 2] <= 0.0 ? 1.0
                                                                       : d2v[d2v.size() / 2];
                    log(LogLevel::Info, "gram rbf t auto-set to " + format_double(spec.t));
                }
            }
            return spec;
        };
        const CMatrix k1 = gram_matrix(d1.features, spec_for(d1.features));
        const CMatrix k2 = gram_matrix(d2.features, spec_for(d2.features));
        ka_cfg.rbf_t = ka_latent_t;
        KernelModel model = align(k1, k2, ka_cfg);
        if (model.stalled) log(LogLevel::Warn, "kernel alignment stalled; best iterate kept");
        if (ka_cfg.strict_paper_distortion) {
            // honor the literal operand order; for p != n this is an error
            distortion(model.a1, k1, true);
            distortion(model.a2, k2, true);
        }
        write_file_atomic(ka_out, latent_csv(model, d1.ids, d2.ids));
        if (!ka_trace_out.empty()) write_file_atomic(ka_trace_out, trace_csv(model.trace));
        return 0;
    }

    if (*sc_verify) {
        VerifyOptions opts;
        opts.seed = vf_seed;
        opts.n = vf_n;
        opts.trials = vf_trials;
        const VerifyReport rep = run_verification(opts);
        std::cout << rep.text;
        if (!vf_out.empty()) write_file_atomic(vf_out, rep.text);
        return rep.all_pass ? 0 : 4;
    }

    if (*sc_ind) {
        apply_graph_config(cfg, sc_ind, &in_graph);
        cfg.apply(sc_ind, "alpha", &in_couple.alpha);
        cfg.apply(sc_ind, "eta", &in_couple.eta);
        const PipelineInputs p = build_pipeline(in_x1, in_x2, in_graph, in_couple);
        const cplx f = indicator(p.graph.w, p.graph.theta);
        const cplx ref =
            static_cast<double>(p.graph.size()) * std::exp(cplx(0.0, p.graph.theta));
        std::cout << "f(psi) = " << format_double(f.real()) << " + "
                  << format_double(f.imag()) << "i\n";
        std::cout << "n e^{i theta} = " << format_double(ref.real()) << " + "
                  << format_double(ref.imag()) << "i\n";
        return 0;
    }

    if (*sc_eval) {
        const EmbeddingTable t = load_embedding_csv(ev_embed);
        if (t.y1.rows() != t.y2.rows())
            throw InvalidArgument("eval: datasets in the embedding differ in size");
        std::cout << "foscttm = " << format_double(align_error(t.y1, t.y2)) << "\n";
        return 0;
    }

    if (*sc_plot) {
        const EmbeddingTable t = load_embedding_csv(pl_embed);
        write_file_atomic(pl_out, svg_scatter(t, pl_pairs));
        return 0;
    }

    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    try {
        return dispatch(argc, argv);
    } catch (const InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    }
}

} // namespace calign::cli
