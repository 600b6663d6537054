#include "mineroi/cv.hpp"

#include <cstdio>
#include <sstream>

#include "mineroi/error.hpp"

namespace mineroi {

std::vector<const CvCell*> CvResult::cells_for(const std::string& split) const {
    std::vector<const CvCell*> out;
    for (const auto& cell : cells) {
        if (cell.split == split) out.push_back(&cell);
    }
    return out;
}

EvalReport evaluate_network(Network& net, const std::vector<WindowSample>& samples,
                            std::uint64_t seed, int batch_size) {
    if (samples.empty()) throw InputError("evaluate: empty sample set");
    std::vector<int> truth;
    Eigen::MatrixXd probs(static_cast<Eigen::Index>(samples.size()), 3);

    Eigen::Index row = 0;
    for (std::size_t start = 0; start < samples.size();
         start += static_cast<std::size_t>(batch_size)) {
        const std::size_t stop =
            std::min(samples.size(), start + static_cast<std::size_t>(batch_size));
        std::vector<Eigen::MatrixXd> xs;
        for (std::size_t i = start; i < stop; ++i) {
            xs.push_back(samples[i].x);
            truth.push_back(samples[i].label);
        }
        const Eigen::MatrixXd logits = net.forward_logits(xs, /*training=*/false, nullptr);
        for (Eigen::Index r = 0; r < logits.rows(); ++r) {
            const double mx = logits.row(r).maxCoeff();
            Eigen::Vector3d e = (logits.row(r).transpose().array() - mx).exp();
            probs.row(row++) = (e / e.sum()).transpose();
        }
    }
    return evaluate_predictions(truth, probs, seed);
}

CvResult cross_validate(const SampleStore& store, const SplitPlan& plan, const CvRunConfig& config) {
    const std::vector<SplitData> splits = build_splits(store, plan);
    if (config.seeds.empty()) throw ConfigError("cross_validate: at least one seed required");

    CvResult result;
    for (const auto& split : splits) {
        result.split_names.push_back(split.name);
        for (const std::uint64_t seed : config.seeds) {
            TrainConfig tcfg = config.train;
            tcfg.seed = seed;
            tcfg.class_weights = split.class_weights;

            std::unique_ptr<Network> net =
                config.kind == ModelKind::MineroiNet
                    ? make_mineroi_network(config.model, seed)
                    : make_lstm_network(config.lstm, seed);

            CvCell cell;
            cell.split = split.name;
            cell.seed = seed;
            cell.history = train(*net, tcfg, split.train, split.eval).history;
            cell.report = evaluate_network(*net, split.eval, seed, tcfg.batch_size);
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

namespace {

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// mean over seeds of one split's metric
double split_mean(const std::vector<const CvCell*>& cells, bool accuracy) {
    double sum = 0.0;
    for (const CvCell* c : cells) {
        sum += accuracy ? c->report.summary.accuracy : c->report.summary.macro_f1;
    }
    return sum / static_cast<double>(cells.size());
}

}  // namespace

std::string cv_table_text(const CvResult& result) {
    std::ostringstream out;
    out << "metric";
    for (const auto& name : result.split_names) out << "\t" << name;
    out << "\tAvg ± Std\n";

    for (const bool accuracy : {true, false}) {
        out << (accuracy ? "accuracy" : "macro_f1");
        std::vector<double> per_split;
        for (const auto& name : result.split_names) {
            const double v = split_mean(result.cells_for(name), accuracy);
            per_split.push_back(v);
            out << "\t" << fmt3(v);
        }
        if (per_split.size() >= 2) {
            const MeanStd agg = mean_std(per_split);
            out << "\t" << fmt3(agg.mean) << " ± " << fmt3(agg.stddev);
        } else {
            out << "\t" << fmt3(per_split.front()) << " ± 0.000";
        }
        out << "\n";
    }
    return out.str();
}

std::string final_table_text(const std::vector<EvalReport>& reports) {
    std::ostringstream out;
    out << "metric\tmean ± std\n";
    if (reports.size() < 2) {
        const auto& r = reports.front();
        out << "accuracy\t" << fmt3(r.summary.accuracy) << " ± 0.000\n";
        out << "macro_f1\t" << fmt3(r.summary.macro_f1) << " ± 0.000\n";
        out << "macro_auc\t" << fmt3(r.auc.macro) << " ± 0.000\n";
        return out.str();
    }
    const AggregateReport agg = aggregate_seeds(reports);
    auto line = [&](const char* name, const MeanStd& m) {
        out << name << "\t" << fmt3(m.mean) << " ± " << fmt3(m.stddev) << "\n";
    };
    line("accuracy", agg.accuracy);
    line("macro_f1", agg.macro_f1);
    line("macro_precision", agg.macro_precision);
    line("macro_recall", agg.macro_recall);
    line("macro_auc", agg.macro_auc);
    for (int c = 0; c < 3; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        line(("precision_" + std::to_string(c)).c_str(), agg.precision[ci]);
        line(("recall_" + std::to_string(c)).c_str(), agg.recall[ci]);
        line(("f1_" + std::to_string(c)).c_str(), agg.f1[ci]);
        line(("auc_" + std::to_string(c)).c_str(), agg.auc[ci]);
    }
    return out.str();
}

}  // namespace mineroi
