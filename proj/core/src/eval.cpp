#include "shapfoil/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "shapfoil/strings.hpp"

namespace shapfoil {

EvalReport report_from_confusion(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  EvalReport r;
  r.tp = tp;
  r.fp = fp;
  r.tn = tn;
  r.fn = fn;
  const std::size_t total = tp + fp + tn + fn;
  r.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  r.accuracy = total ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
  r.f1 = r.precision + r.recall > 0
             ? 2 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

namespace {

template <typename Predict>
EvalReport confusion_of(const Dataset& test, Predict&& predict) {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const Sample& s : test.samples) {
    int pred = predict(s);
    if (s.label > 0)
      (pred > 0 ? tp : fn)++;
    else
      (pred > 0 ? fp : tn)++;
  }
  return report_from_confusion(tp, fp, tn, fn);
}

}  // namespace

EvalReport evaluate_hypothesis(const Hypothesis& h, const Dataset& test) {
  EvalReport r = confusion_of(test, [&](const Sample& s) {
    return hypothesis_predict(h, test.schema, s);
  });
  r.program_size = program_size(h);
  return r;
}

EvalReport evaluate_model(const SvmModel& m, const BinarizedMatrix& preprocessing,
                          const Dataset& test) {
  return confusion_of(test, [&](const Sample& s) {
    return classify(m, binarize_sample(preprocessing, test.schema, s));
  });
}

EvalReport evaluate_with_fidelity(const Hypothesis& h, const SvmModel& m,
                                  const BinarizedMatrix& preprocessing, const Dataset& test) {
  EvalReport r = evaluate_hypothesis(h, test);
  std::size_t agree = 0;
  for (const Sample& s : test.samples) {
    int hp = hypothesis_predict(h, test.schema, s);
    int mp = classify(m, binarize_sample(preprocessing, test.schema, s));
    agree += hp == mp;
  }
  r.fidelity = test.samples.empty()
                   ? 1.0
                   : static_cast<double>(agree) / static_cast<double>(test.samples.size());
  return r;
}

ProgramSize program_size(const Hypothesis& h, int rounding) {
  ProgramSize p;
  p.clauses = h.clauses.size();
  for (const Clause& c : h.clauses) p.literals += c.body.size();
  const std::string text = serialize_prolog(h, rounding);
  p.lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  return p;
}

std::string compare_report(const std::vector<std::pair<std::string, EvalReport>>& reports,
                           ReportFormat format) {
  std::ostringstream out;
  auto num = [&](double v) { return format_double_trimmed(v, 4); };
  if (format == ReportFormat::Csv) {
    out << "name,tp,fp,tn,fn,precision,recall,accuracy,f1,fidelity\n";
    for (const auto& [name, r] : reports) {
      out << name << ',' << r.tp << ',' << r.fp << ',' << r.tn << ',' << r.fn << ','
          << num(r.precision) << ',' << num(r.recall) << ',' << num(r.accuracy) << ','
          << num(r.f1) << ',' << (r.fidelity ? num(*r.fidelity) : "") << '\n';
    }
    out << "name,clauses,literals,lines\n";
    for (const auto& [name, r] : reports)
      if (r.program_size)
        out << name << ',' << r.program_size->clauses << ',' << r.program_size->literals << ','
            << r.program_size->lines << '\n';
    return out.str();
  }

  out << std::left << std::setw(14) << "name" << std::right << std::setw(6) << "tp"
      << std::setw(6) << "fp" << std::setw(6) << "tn" << std::setw(6) << "fn" << std::setw(9)
      << "prec" << std::setw(9) << "recall" << std::setw(9) << "acc" << std::setw(9) << "f1"
      << std::setw(10) << "fidelity" << '\n';
  for (const auto& [name, r] : reports) {
    out << std::left << std::setw(14) << name << std::right << std::setw(6) << r.tp
        << std::setw(6) << r.fp << std::setw(6) << r.tn << std::setw(6) << r.fn << std::setw(9)
        << num(r.precision) << std::setw(9) << num(r.recall) << std::setw(9) << num(r.accuracy)
        << std::setw(9) << num(r.f1) << std::setw(10) << (r.fidelity ? num(*r.fidelity) : "-")
        << '\n';
  }
  bool any_size = std::any_of(reports.begin(), reports.end(),
                              [](const auto& p) { return p.second.program_size.has_value(); });
  if (any_size) {
    out << '\n'
        << std::left << std::setw(14) << "name" << std::right << std::setw(9) << "clauses"
        << std::setw(10) << "literals" << std::setw(7) << "lines" << '\n';
    for (const auto& [name, r] : reports)
      if (r.program_size)
        out << std::left << std::setw(14) << name << std::right << std::setw(9)
            << r.program_size->clauses << std::setw(10) << r.program_size->literals
            << std::setw(7) << r.program_size->lines << '\n';
  }
  return out.str();
}

}  // namespace shapfoil
