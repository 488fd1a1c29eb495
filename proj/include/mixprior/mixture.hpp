#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "families.hpp"
#include "measure.hpp"

namespace mixprior {

// Finite weighted mixture of process measures (a Bayesian predictor with a
// discrete prior). Weights must be positive and sum to 1.
class MixtureMeasure : public ProcessMeasure {
  public:
    using Component = std::pair<double, MeasurePtr>;

    explicit MixtureMeasure(std::vector<Component> components, std::string name = "mix")
        : ProcessMeasure(check_components(components)), components_(std::move(components)),
          name_(std::move(name)) {
        log_weights_.reserve(components_.size());
        for (const auto &[w, m] : components_)
            log_weights_.push_back(std::log2(w));
    }

    const std::vector<Component> &components() const { return components_; }

    std::unique_ptr<MeasureWalker> walker() const override {
        class Walker : public MeasureWalker {
          public:
            explicit Walker(const MixtureMeasure &m) : m_(m) {
                children_.reserve(m.components_.size());
                for (const auto &[w, c] : m.components_)
                    children_.push_back(c->walker());
            }

          protected:
            // log2 nu(a | x) = log2 sum_i w_i mu_i(x a) - log2 sum_i w_i mu_i(x)
            double do_step(Symbol a) const override {
                double joint = kLogZero;
                for (std::size_t i = 0; i < children_.size(); ++i) {
                    double m = children_[i]->log2_marginal();
                    if (m == kLogZero)
                        continue;
                    double s = children_[i]->log2_step(a);
                    if (s == kLogZero)
                        continue;
                    joint = log2_add_exp(joint, m_.log_weights_[i] + m + s);
                }
                if (joint == kLogZero)
                    return kLogZero;
                return joint - log2_marginal();
            }
            void do_push(Symbol a) override {
                for (auto &c : children_)
                    c->push(a);
            }
            void do_pop() override {
                for (auto &c : children_)
                    c->pop();
            }

          private:
            const MixtureMeasure &m_;
            std::vector<std::unique_ptr<MeasureWalker>> children_;
        };
        return std::make_unique<Walker>(*this);
    }

    std::string identity() const override {
        std::string out = name_ + "(";
        for (std::size_t i = 0; i < components_.size(); ++i) {
            if (i)
                out += '+';
            out += format_double(components_[i].first) + "*" +
                   components_[i].second->identity();
        }
        return out + ")";
    }

    json spec_json() const override {
        json comps = json::array();
        for (const auto &[w, m] : components_)
            comps.push_back(json{{"weight", w}, {"measure", m->spec_json()}});
        return json{{"family", "mixture"}, {"components", comps}};
    }

  private:
    static Alphabet check_components(const std::vector<Component> &components) {
        if (components.empty())
            throw InputError("mixture needs at least one component");
        double sum = 0.0;
        for (const auto &[w, m] : components) {
            if (!(w > 0.0))
                throw InputError("mixture weights must be positive");
            if (!(m->alphabet() == components[0].second->alphabet()))
                throw InputError("mixture components use different alphabets");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw InputError("mixture weights sum to " + format_double(sum) +
                             ", expected 1");
        return components[0].second->alphabet();
    }

    std::vector<Component> components_;
    std::string name_;
    std::vector<double> log_weights_;
};

// rho' = (rho + delta)/2 with delta the equal-probability i.i.d. measure, so
// that -log2 rho'(x_{1..n}) <= nM + 1 for every string.
inline std::shared_ptr<const MixtureMeasure> mix_with_uniform(const MeasurePtr &rho) {
    std::vector<MixtureMeasure::Component> comps{
        {0.5, rho}, {0.5, uniform_measure(rho->alphabet())}};
    return std::make_shared<MixtureMeasure>(std::move(comps), "smoothed");
}

} // namespace mixprior
