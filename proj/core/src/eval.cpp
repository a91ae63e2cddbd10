#include "pose9d/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pose9d/geometry.hpp"
#include "pose9d/parallel.hpp"

namespace pose9d {

using nlohmann::json;

EvalConfig::EvalConfig() {
  const Eigen::Vector3d up = Eigen::Vector3d::UnitY();
  symmetry["bottle"] = SymmetryClass::continuous(up);
  symmetry["bowl"] = SymmetryClass::continuous(up);
  symmetry["can"] = SymmetryClass::continuous(up);
}

void EvalConfig::validate() const {
  if (categories.empty()) throw InvalidArgument("category list must be non-empty");
  for (size_t i = 0; i + 1 < iou_thresholds.size(); ++i)
    if (!(iou_thresholds[i] < iou_thresholds[i + 1]))
      throw InvalidArgument("IoU thresholds must be strictly ascending");
  for (double t : iou_thresholds)
    if (!(t > 0.0)) throw InvalidArgument("IoU thresholds must be positive");
  for (const auto& [deg, cm] : pose_thresholds)
    if (!(deg > 0.0) || !(cm > 0.0)) throw InvalidArgument("pose thresholds must be positive");
  for (size_t i = 0; i + 1 < pose_thresholds.size(); ++i)
    if (pose_thresholds[i + 1] < pose_thresholds[i])
      throw InvalidArgument("pose thresholds must be sorted ascending");
  if (symmetry_steps < 1) throw InvalidArgument("symmetry_steps must be >= 1");
  if (rounding < 0 || rounding > 12) throw InvalidArgument("rounding must be in [0, 12]");
  for (const auto& [cat, sym] : symmetry) sym.validate();
}

SymmetryClass EvalConfig::symmetry_for(const std::string& category) const {
  const auto it = symmetry.find(category);
  return it == symmetry.end() ? SymmetryClass::none() : it->second;
}

namespace {

SymmetryClass symmetry_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return SymmetryClass::none();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitY();
  if (j.contains("axis")) {
    const auto& a = j.at("axis");
    if (!a.is_array() || a.size() != 3) throw ParseError("symmetry axis must have 3 entries");
    axis = Eigen::Vector3d(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
  }
  if (kind == "continuous_axis") return SymmetryClass::continuous(axis);
  if (kind == "discrete_axis") return SymmetryClass::discrete(axis, j.at("order").get<int>());
  throw ParseError("unknown symmetry kind: " + kind);
}

}  // namespace

EvalConfig load_eval_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }

  EvalConfig cfg;
  if (j.contains("categories")) cfg.categories = j["categories"].get<std::vector<std::string>>();
  if (j.contains("symmetry")) {
    cfg.symmetry.clear();
    for (const auto& [cat, spec] : j["symmetry"].items())
      cfg.symmetry[cat] = symmetry_from_json(spec);
  }
  if (j.contains("iou_thresholds")) cfg.iou_thresholds = j["iou_thresholds"].get<std::vector<double>>();
  if (j.contains("pose_thresholds")) {
    cfg.pose_thresholds.clear();
    for (const auto& t : j["pose_thresholds"]) {
      if (!t.is_array() || t.size() != 2) throw ParseError("pose threshold must be [deg, cm]");
      cfg.pose_thresholds.emplace_back(t[0].get<double>(), t[1].get<double>());
    }
  }
  if (j.contains("symmetry_steps")) cfg.symmetry_steps = j["symmetry_steps"].get<int>();
  if (j.contains("rounding")) cfg.rounding = j["rounding"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  cfg.validate();
  return cfg;
}

namespace {

Eigen::Vector3d vec3_field(const json& j, const char* field, long line_no) {
  const auto& a = j.at(field);
  if (!a.is_array() || a.size() != 3)
    throw ValidationError("field '" + std::string(field) + "' must have 3 entries (line " +
                          std::to_string(line_no) + ")");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

FrameRecord record_from_json(const json& j, long line_no) {
  FrameRecord rec;
  try {
    rec.frame_id = j.at("frame_id").get<std::string>();
    rec.category = j.at("category").get<std::string>();
    const auto& r = j.at("rotation");
    if (!r.is_array() || r.size() != 9)
      throw ValidationError("field 'rotation' must have 9 entries (line " +
                            std::to_string(line_no) + ")");
    for (int k = 0; k < 9; ++k) rec.rotation(k / 3, k % 3) = r[static_cast<size_t>(k)].get<double>();
    rec.translation = vec3_field(j, "translation", line_no);
    rec.size = vec3_field(j, "size", line_no);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad record: ") + e.what(), line_no);
  }

  const double deviation =
      std::max((rec.rotation.transpose() * rec.rotation - Eigen::Matrix3d::Identity())
                   .cwiseAbs()
                   .maxCoeff(),
               std::abs(rec.rotation.determinant() - 1.0));
  if (deviation >= 1e-3)
    throw ValidationError("field 'rotation' deviates from orthonormal by " +
                          std::to_string(deviation) + " (line " + std::to_string(line_no) + ")");
  rec.rotation = orthonormalize(rec.rotation);
  if (!(rec.size.array() > 0.0).all())
    throw ValidationError("field 'size' must be positive (line " + std::to_string(line_no) + ")");
  return rec;
}

}  // namespace

std::vector<FrameRecord> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open records file: " + path);
  std::vector<FrameRecord> records;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    records.push_back(record_from_json(j, line_no));
  }
  return records;
}

void save_records(const std::vector<FrameRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open records file for writing: " + path);
  for (const FrameRecord& rec : records) {
    json j;
    j["frame_id"] = rec.frame_id;
    j["category"] = rec.category;
    std::vector<double> r(9);
    for (int k = 0; k < 9; ++k) r[static_cast<size_t>(k)] = rec.rotation(k / 3, k % 3);
    j["rotation"] = r;
    j["translation"] = {rec.translation.x(), rec.translation.y(), rec.translation.z()};
    j["size"] = {rec.size.x(), rec.size.y(), rec.size.z()};
    out << j.dump() << "\n";
  }
  if (!out) throw IoError("failed writing records file: " + path);
}

MetricReport evaluate(const std::vector<FrameRecord>& predictions,
                      const std::vector<FrameRecord>& ground_truth, const EvalConfig& cfg,
                      int workers) {
  cfg.validate();

  auto check_category = [&cfg](const FrameRecord& rec) {
    if (std::find(cfg.categories.begin(), cfg.categories.end(), rec.category) ==
        cfg.categories.end())
      throw ValidationError("record " + rec.frame_id + " has unconfigured category '" +
                            rec.category + "'");
  };

  std::map<std::pair<std::string, std::string>, const FrameRecord*> gt_by_key;
  for (const FrameRecord& rec : ground_truth) {
    check_category(rec);
    const auto key = std::make_pair(rec.frame_id, rec.category);
    if (!gt_by_key.emplace(key, &rec).second)
      throw MatchingError("duplicate ground-truth key (" + rec.frame_id + ", " + rec.category + ")");
  }

  // Sort predictions by key: aggregation order (and hence the report) is then
  // independent of input record order.
  std::vector<const FrameRecord*> preds;
  preds.reserve(predictions.size());
  {
    std::map<std::pair<std::string, std::string>, const FrameRecord*> pred_by_key;
    for (const FrameRecord& rec : predictions) {
      check_category(rec);
      const auto key = std::make_pair(rec.frame_id, rec.category);
      if (!pred_by_key.emplace(key, &rec).second)
        throw MatchingError("duplicate prediction key (" + rec.frame_id + ", " + rec.category + ")");
      if (gt_by_key.find(key) == gt_by_key.end())
        throw MatchingError("prediction without ground truth: (" + rec.frame_id + ", " +
                            rec.category + ")");
    }
    for (const auto& [key, rec] : gt_by_key)
      if (pred_by_key.find(key) == pred_by_key.end())
        throw MatchingError("ground truth without prediction: (" + key.first + ", " + key.second +
                            ")");
    for (const auto& [key, rec] : pred_by_key) preds.push_back(rec);
  }

  struct PairResult {
    double iou = 0.0;
    PoseError error;
  };
  std::vector<PairResult> results(preds.size());
  parallel_for(preds.size(), workers, [&](std::size_t i) {
    const FrameRecord& pred = *preds[i];
    const FrameRecord& gt =
        *gt_by_key.at(std::make_pair(pred.frame_id, pred.category));
    const SymmetryClass sym = cfg.symmetry_for(pred.category);
    const OrientedBox3D pred_box{pred.pose()};
    const OrientedBox3D gt_box{gt.pose()};
    results[i].iou = symmetric_box_iou(pred_box, gt_box, sym, cfg.symmetry_steps);
    results[i].error = pose_error(pred.pose(), gt.pose(), sym);
  });

  std::map<std::string, std::vector<double>> ious_by_cat;
  std::map<std::string, std::vector<PoseError>> errors_by_cat;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ious_by_cat[preds[i]->category].push_back(results[i].iou);
    errors_by_cat[preds[i]->category].push_back(results[i].error);
  }

  MetricReport report;
  report.iou_thresholds = cfg.iou_thresholds;
  report.pose_thresholds = cfg.pose_thresholds;
  report.rounding = cfg.rounding;
  report.frame_count = preds.size();

  for (const auto& [category, ious] : ious_by_cat) {
    MetricReport::Row row;
    row.iou_acc = iou_accuracy(ious, cfg.iou_thresholds);
    row.pose_acc = threshold_accuracy(errors_by_cat.at(category), cfg.pose_thresholds);
    report.per_category[category] = std::move(row);
  }

  // mean over categories (every category weighs the same, as in the usual
  // benchmark protocol)
  const double ncat = static_cast<double>(report.per_category.size());
  if (ncat > 0) {
    report.mean.iou_acc.assign(cfg.iou_thresholds.size(), 0.0);
    report.mean.pose_acc.assign(cfg.pose_thresholds.size(), 0.0);
    for (const auto& [category, row] : report.per_category) {
      for (size_t k = 0; k < row.iou_acc.size(); ++k) report.mean.iou_acc[k] += row.iou_acc[k];
      for (size_t k = 0; k < row.pose_acc.size(); ++k) report.mean.pose_acc[k] += row.pose_acc[k];
    }
    for (double& v : report.mean.iou_acc) v /= ncat;
    for (double& v : report.mean.pose_acc) v /= ncat;
  }

  report.check_monotonic();
  return report;
}

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "text" || name == "text-table") return ReportFormat::kTextTable;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw InvalidArgument("unknown report format: " + name);
}

namespace {

std::string iou_label(double thr) {
  std::ostringstream ss;
  ss << "3D" << static_cast<int>(std::lround(thr * 100));
  return ss.str();
}

std::string pose_label(const std::pair<double, double>& thr) {
  std::ostringstream ss;
  auto num = [](double v) {
    std::ostringstream n;
    n << v;
    return n.str();
  };
  ss << num(thr.first) << "°" << num(thr.second) << "cm";
  return ss.str();
}

// column width in terminal cells, not bytes (the degree sign is multi-byte)
size_t display_width(const std::string& s) {
  size_t w = 0;
  for (unsigned char c : s)
    if ((c & 0xc0) != 0x80) ++w;
  return w;
}

std::string render_text(const MetricReport& report) {
  std::vector<std::string> headers{"category"};
  for (double t : report.iou_thresholds) headers.push_back(iou_label(t));
  for (const auto& t : report.pose_thresholds) headers.push_back(pose_label(t));

  auto fmt = [&report](double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(report.rounding) << v;
    return ss.str();
  };

  std::vector<std::vector<std::string>> rows;
  for (const auto& [category, row] : report.per_category) {
    std::vector<std::string> r{category};
    for (double v : row.iou_acc) r.push_back(fmt(v));
    for (double v : row.pose_acc) r.push_back(fmt(v));
    rows.push_back(std::move(r));
  }
  {
    std::vector<std::string> r{"mean"};
    for (double v : report.mean.iou_acc) r.push_back(fmt(v));
    for (double v : report.mean.pose_acc) r.push_back(fmt(v));
    rows.push_back(std::move(r));
  }

  std::vector<size_t> width(headers.size());
  for (size_t c = 0; c < headers.size(); ++c) {
    width[c] = display_width(headers[c]);
    for (const auto& r : rows) width[c] = std::max(width[c], display_width(r[c]));
  }

  std::ostringstream out;
  auto emit_row = [&](const std::vector<std::string>& r) {
    for (size_t c = 0; c < r.size(); ++c) {
      out << (c == 0 ? "" : "  ");
      if (c == 0)
        out << r[c] << std::string(width[c] - display_width(r[c]), ' ');
      else
        out << std::string(width[c] - display_width(r[c]), ' ') << r[c];
    }
    out << "\n";
  };
  emit_row(headers);
  {
    size_t total = 0;
    for (size_t c = 0; c < width.size(); ++c) total += width[c] + (c == 0 ? 0 : 2);
    out << std::string(total, '-') << "\n";
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i + 1 == rows.size()) {
      size_t total = 0;
      for (size_t c = 0; c < width.size(); ++c) total += width[c] + (c == 0 ? 0 : 2);
      out << std::string(total, '-') << "\n";
    }
    emit_row(rows[i]);
  }
  out << "frames: " << report.frame_count;
  if (report.fps) out << ", throughput: " << fmt(*report.fps) << " frames/s (metric pipeline only)";
  out << "\n";
  return out.str();
}

std::string render_csv(const MetricReport& report) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "category";
  for (double t : report.iou_thresholds) out << "," << iou_label(t);
  for (const auto& t : report.pose_thresholds)
    out << ",deg" << t.first << "_" << t.second << "cm";
  out << "\n";
  auto emit = [&out](const std::string& name, const MetricReport::Row& row) {
    out << name;
    for (double v : row.iou_acc) out << "," << v;
    for (double v : row.pose_acc) out << "," << v;
    out << "\n";
  };
  for (const auto& [category, row] : report.per_category) emit(category, row);
  emit("mean", report.mean);
  return out.str();
}

std::string render_json(const MetricReport& report) {
  json j;
  j["frame_count"] = report.frame_count;
  j["iou_thresholds"] = report.iou_thresholds;
  json pose_thr = json::array();
  for (const auto& t : report.pose_thresholds) pose_thr.push_back({t.first, t.second});
  j["pose_thresholds"] = pose_thr;
  if (report.fps)
    j["fps"] = *report.fps;
  else
    j["fps"] = nullptr;
  auto row_json = [](const MetricReport::Row& row) {
    json r;
    r["iou_acc"] = row.iou_acc;
    r["pose_acc"] = row.pose_acc;
    return r;
  };
  j["per_category"] = json::object();
  for (const auto& [category, row] : report.per_category)
    j["per_category"][category] = row_json(row);
  j["mean"] = row_json(report.mean);
  return j.dump(2) + "\n";
}

}  // namespace

std::string render_report(const MetricReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kTextTable: return render_text(report);
    case ReportFormat::kCsv: return render_csv(report);
    case ReportFormat::kJson: return render_json(report);
  }
  throw InvalidArgument("invalid report format value");
}

}  // namespace pose9d
