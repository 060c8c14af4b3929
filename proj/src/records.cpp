#include "wayref/records.hpp"

#include <istream>
#include "json.hpp"

#include "wayref/errors.hpp"

namespace wayref {

using nlohmann::ordered_json;

namespace {

ordered_json points_json(const std::vector<GeoPoint>& pts) {
  ordered_json a = ordered_json::array();
  for (const GeoPoint& p : pts) a.push_back({p.easting, p.northing});
  return a;
}

std::vector<GeoPoint> points_from(const ordered_json& a, int zone) {
  std::vector<GeoPoint> out;
  for (const auto& p : a) out.push_back({p.at(0).get<double>(), p.at(1).get<double>(), zone});
  return out;
}

ordered_json classes_json(const std::vector<ClassStep>& cs) {
  ordered_json a = ordered_json::array();
  for (const ClassStep& c : cs) a.push_back({c.lon, c.lat});
  return a;
}

std::vector<ClassStep> classes_from(const ordered_json& a) {
  std::vector<ClassStep> out;
  for (const auto& c : a) out.push_back({c.at(0).get<std::int64_t>(), c.at(1).get<std::int64_t>()});
  return out;
}

System system_from(const ordered_json& j) {
  const auto s = parse_system(j.get<std::string>());
  if (!s) throw ParseError("unknown reference system '" + j.get<std::string>() + "'");
  return *s;
}

template <class F>
auto parse_guard(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON record: ") + e.what());
  }
}

}  // namespace

std::string to_json_line(const FeatureRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["vessel_id"] = r.vessel_id;
  j["system"] = std::string(to_string(r.system));
  j["direction"] = std::string(to_string(r.direction));
  j["t0"] = r.t0;
  j["observed_classes"] = classes_json(r.observed_classes);
  j["future_classes"] = classes_json(r.future_classes);
  j["context"] = r.context;
  j["anchor"] = {{"easting", r.anchor.position.easting},
                 {"northing", r.anchor.position.northing},
                 {"zone", r.anchor.position.zone},
                 {"heading", r.anchor.heading},
                 {"internal_km", r.anchor.km},
                 {"official_km", r.anchor_official_km},
                 {"rel", r.anchor.rel},
                 {"s", r.anchor.s}};
  j["observed_positions"] = points_json(r.observed_positions);
  j["future_positions"] = points_json(r.future_positions);
  return j.dump();
}

FeatureRecord parse_feature_record(std::string_view line) {
  return parse_guard([&] {
    const ordered_json j = ordered_json::parse(line);
    FeatureRecord r;
    r.id = j.at("id").get<std::string>();
    r.vessel_id = j.value("vessel_id", std::string{});
    r.system = system_from(j.at("system"));
    const auto dir = parse_direction(j.value("direction", std::string("up")));
    if (!dir) throw ParseError("unknown direction in record " + r.id);
    r.direction = *dir;
    r.t0 = j.value("t0", 0.0);
    r.observed_classes = classes_from(j.at("observed_classes"));
    r.future_classes = classes_from(j.at("future_classes"));
    r.context = j.at("context").get<std::vector<double>>();
    const auto& a = j.at("anchor");
    const int zone = a.value("zone", 0);
    r.anchor.position = {a.at("easting").get<double>(), a.at("northing").get<double>(), zone};
    r.anchor.heading = a.at("heading").get<double>();
    r.anchor.km = a.at("internal_km").get<double>();
    r.anchor_official_km = a.value("official_km", r.anchor.km);
    r.anchor.rel = a.at("rel").get<double>();
    r.anchor.s = a.at("s").get<double>();
    r.observed_positions = points_from(j.value("observed_positions", ordered_json::array()), zone);
    r.future_positions = points_from(j.at("future_positions"), zone);
    return r;
  });
}

std::string to_json_line(const PredictionRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["system"] = std::string(to_string(r.system));
  j["units"] = r.units == PredictionUnits::classes ? "classes" : "continuous";
  ordered_json samples = ordered_json::array();
  for (const auto& member : r.mc_samples) {
    ordered_json m = ordered_json::array();
    for (const FeatureStep& s : member) {
      if (r.units == PredictionUnits::classes)
        m.push_back({static_cast<std::int64_t>(s.lon), static_cast<std::int64_t>(s.lat)});
      else
        m.push_back({s.lon, s.lat});
    }
    samples.push_back(std::move(m));
  }
  j["mc_samples"] = std::move(samples);
  return j.dump();
}

PredictionRecord parse_prediction_record(std::string_view line) {
  return parse_guard([&] {
    const ordered_json j = ordered_json::parse(line);
    PredictionRecord r;
    r.id = j.at("id").get<std::string>();
    r.system = system_from(j.at("system"));
    const std::string units = j.value("units", std::string("continuous"));
    if (units == "classes")
      r.units = PredictionUnits::classes;
    else if (units == "continuous")
      r.units = PredictionUnits::continuous;
    else
      throw ParseError("unknown prediction units '" + units + "'");
    for (const auto& member : j.at("mc_samples")) {
      std::vector<FeatureStep> steps;
      for (const auto& s : member) steps.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
      r.mc_samples.push_back(std::move(steps));
    }
    if (r.mc_samples.empty()) throw ParseError("prediction " + r.id + " has no ensemble members");
    return r;
  });
}

namespace {

template <class Record, class Parse>
std::vector<Record> read_lines(std::istream& in, Parse parse) {
  std::vector<Record> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse(line));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), number);
    }
  }
  return out;
}

}  // namespace

std::vector<FeatureRecord> read_feature_records(std::istream& in) {
  return read_lines<FeatureRecord>(in, [](std::string_view l) { return parse_feature_record(l); });
}

std::vector<PredictionRecord> read_prediction_records(std::istream& in) {
  return read_lines<PredictionRecord>(in, [](std::string_view l) { return parse_prediction_record(l); });
}

std::string codebook_to_json(const Codebook& cb) {
  auto axis = [](const AxisCode& a) {
    return ordered_json{{"resolution", a.resolution}, {"min_class", a.min_class}, {"max_class", a.max_class}};
  };
  ordered_json j;
  j["system"] = std::string(to_string(cb.system));
  j["longitudinal"] = axis(cb.lon);
  j["lateral"] = axis(cb.lat);
  return j.dump(2) + "\n";
}

Codebook codebook_from_json(std::string_view text) {
  return parse_guard([&] {
    const ordered_json j = ordered_json::parse(text);
    auto axis = [](const ordered_json& a) {
      return AxisCode{a.at("resolution").get<double>(), a.at("min_class").get<std::int64_t>(),
                      a.at("max_class").get<std::int64_t>()};
    };
    Codebook cb;
    cb.system = system_from(j.at("system"));
    cb.lon = axis(j.at("longitudinal"));
    cb.lat = axis(j.at("lateral"));
    return cb;
  });
}

DislocationSeq anchor_sequence(const FeatureRecord& r, const std::vector<FeatureStep>& steps) {
  DislocationSeq seq;
  seq.system = r.system;
  seq.direction = r.direction;
  seq.anchor = r.anchor;
  seq.steps = steps;
  return seq;
}

}  // namespace wayref
