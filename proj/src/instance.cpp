#include "carshare/instance.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "carshare/rng.hpp"

namespace carshare {

std::string to_string(Group g) {
  switch (g) {
    case Group::st: return "st";
    case Group::ft: return "ft";
    case Group::fc: return "fc";
  }
  return "?";
}

Group parse_group(const std::string& s) {
  if (s == "st") return Group::st;
  if (s == "ft") return Group::ft;
  if (s == "fc") return Group::fc;
  throw InstanceError("unknown instance group '" + s + "'");
}

std::vector<int> Instance::time_points(Station s) const {
  std::vector<int> pts;
  pts.reserve(customers.size() * 2);
  for (const auto& c : customers) {
    for (const Demand* d : {&c.outbound, &c.ret}) {
      if (d->origin == s) pts.push_back(d->start);
      if (d->destination() == s) pts.push_back(d->end);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool Solution::contains(CustomerId id) const {
  return std::binary_search(satisfied.begin(), satisfied.end(), id);
}

Solution Solution::from_ids(std::vector<CustomerId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return Solution{std::move(ids)};
}

std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  if (inst.fleet_a < 0 || inst.fleet_b < 0) out.push_back({0, "negative fleet"});
  if (inst.horizon < 0) out.push_back({0, "negative horizon"});
  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    const Customer& c = inst.customers[i];
    if (c.id != static_cast<int>(i) + 1) out.push_back({c.id, "non-contiguous id"});
    if (c.outbound.origin == c.ret.origin) out.push_back({c.id, "same-direction pair"});
    for (const Demand* d : {&c.outbound, &c.ret}) {
      if (d->start >= d->end) out.push_back({c.id, "empty demand"});
      if (d->start < 0 || d->end > inst.horizon) out.push_back({c.id, "time outside horizon"});
    }
    if (c.ret.start < c.outbound.end) out.push_back({c.id, "overlapping demands"});
  }
  return out;
}

void require_valid(const Instance& inst) {
  auto v = validate(inst);
  if (v.empty()) return;
  std::string msg = v.front().what;
  if (v.front().customer != 0) msg = "customer " + std::to_string(v.front().customer) + ": " + msg;
  throw InstanceError(msg);
}

namespace {

constexpr int kDay = 1440;
constexpr int kFleet = 10;

Customer make_customer(int id, bool starts_at_a, int t1, int d1, int t2, int d2) {
  const Station first = starts_at_a ? Station::A : Station::B;
  return Customer{id, Demand{first, t1, t1 + d1}, Demand{other(first), t2, t2 + d2}};
}

Instance empty_generated(Group g, int n, std::uint64_t seed) {
  if (n < 0) throw InstanceError("customer count must be non-negative");
  Instance inst;
  inst.fleet_a = kFleet;
  inst.fleet_b = kFleet;
  inst.horizon = kDay;
  inst.provenance = Provenance{seed, g};
  inst.customers.reserve(static_cast<std::size_t>(n));
  return inst;
}

}  // namespace

Instance generate_st(int n, std::uint64_t seed) {
  Instance inst = empty_generated(Group::st, n, seed);
  SplitMix64 rng(seed);
  for (int id = 1; id <= n; ++id) {
    const int d1 = static_cast<int>(rng.uniform(15, 60));
    const int d2 = static_cast<int>(rng.uniform(15, 60));
    // t1 + d1 < t2 and t2 + d2 <= 1440
    const int t1 = static_cast<int>(rng.uniform(0, kDay - 1 - d1 - d2));
    const int t2 = static_cast<int>(rng.uniform(t1 + d1 + 1, kDay - d2));
    const bool at_a = rng.uniform(0, 1) == 0;
    inst.customers.push_back(make_customer(id, at_a, t1, d1, t2, d2));
  }
  return inst;
}

Instance generate_ft(int n, std::uint64_t seed) {
  Instance inst = empty_generated(Group::ft, n, seed);
  SplitMix64 rng(seed);
  for (int id = 1; id <= n; ++id) {
    const int d = static_cast<int>(rng.uniform(15, 45));
    const int t1 = static_cast<int>(rng.uniform(0, kDay - 1 - 2 * d));
    const int t2 = static_cast<int>(rng.uniform(t1 + d + 1, kDay - d));
    const bool at_a = rng.uniform(0, 1) == 0;
    inst.customers.push_back(make_customer(id, at_a, t1, d, t2, d));
  }
  return inst;
}

Instance generate_fc(int n, std::uint64_t seed) {
  Instance inst = empty_generated(Group::fc, n, seed);
  SplitMix64 rng(seed);
  for (int id = 1; id <= n; ++id) {
    const int d = static_cast<int>(rng.uniform(15, 45));
    const int w = static_cast<int>(rng.uniform(60, 240));
    const int t1 = static_cast<int>(rng.uniform(0, kDay - 2 * d - w));
    const bool at_a = rng.uniform(0, 1) == 0;
    inst.customers.push_back(make_customer(id, at_a, t1, d, t1 + d + w, d));
  }
  return inst;
}

Instance generate(Group g, int n, std::uint64_t seed) {
  switch (g) {
    case Group::st: return generate_st(n, seed);
    case Group::ft: return generate_ft(n, seed);
    case Group::fc: return generate_fc(n, seed);
  }
  throw InstanceError("unknown group");
}

// ---------------------------------------------------------------------------
// text format

namespace {

[[noreturn]] void parse_fail(const std::string& source, int line, const std::string& field,
                             const std::string& msg) {
  std::ostringstream os;
  os << source << ":" << line << ": " << field << ": " << msg;
  throw InstanceError(os.str());
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

template <typename T>
T parse_number(const std::string& tok, const std::string& source, int line, const std::string& field) {
  T value{};
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) parse_fail(source, line, field, "expected integer, got '" + tok + "'");
  return value;
}

// "key=value" with the expected key
std::string keyed(const std::string& tok, const std::string& key, const std::string& source, int line) {
  const std::string prefix = key + "=";
  if (tok.rfind(prefix, 0) != 0) parse_fail(source, line, key, "expected '" + prefix + "...', got '" + tok + "'");
  return tok.substr(prefix.size());
}

}  // namespace

Instance parse_instance(std::istream& in, const std::string& source) {
  Instance inst;
  std::string line;
  int lineno = 0;
  int declared = -1;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (declared < 0) {
      auto tok = split_ws(line);
      if (tok.size() != 6 || tok[0] != "carshare" || tok[1] != "v1")
        parse_fail(source, lineno, "header", "expected 'carshare v1 n=.. mA=.. mB=.. horizon=..'");
      declared = parse_number<int>(keyed(tok[2], "n", source, lineno), source, lineno, "n");
      inst.fleet_a = parse_number<int>(keyed(tok[3], "mA", source, lineno), source, lineno, "mA");
      inst.fleet_b = parse_number<int>(keyed(tok[4], "mB", source, lineno), source, lineno, "mB");
      inst.horizon = parse_number<int>(keyed(tok[5], "horizon", source, lineno), source, lineno, "horizon");
      if (declared < 0) parse_fail(source, lineno, "n", "negative customer count");
      if (inst.fleet_a < 0) parse_fail(source, lineno, "mA", "negative fleet");
      if (inst.fleet_b < 0) parse_fail(source, lineno, "mB", "negative fleet");
      inst.customers.reserve(static_cast<std::size_t>(declared));
      continue;
    }
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto tok = split_ws(line.substr(1));
      if (tok.size() == 2 && tok[0].rfind("seed=", 0) == 0 && tok[1].rfind("group=", 0) == 0) {
        Provenance p;
        p.seed = parse_number<std::uint64_t>(tok[0].substr(5), source, lineno, "seed");
        try {
          p.group = parse_group(tok[1].substr(6));
        } catch (const InstanceError& e) {
          parse_fail(source, lineno, "group", e.what());
        }
        inst.provenance = p;
      }
      continue;
    }
    auto tok = split_ws(line);
    if (tok.size() != 6) parse_fail(source, lineno, "customer", "expected 6 fields");
    Customer c;
    c.id = parse_number<int>(tok[0], source, lineno, "id");
    if (tok[1] == "AB") {
      c.outbound.origin = Station::A;
    } else if (tok[1] == "BA") {
      c.outbound.origin = Station::B;
    } else {
      parse_fail(source, lineno, "dir", "expected AB or BA, got '" + tok[1] + "'");
    }
    c.ret.origin = other(c.outbound.origin);
    c.outbound.start = parse_number<int>(tok[2], source, lineno, "o_start");
    c.outbound.end = parse_number<int>(tok[3], source, lineno, "o_end");
    c.ret.start = parse_number<int>(tok[4], source, lineno, "r_start");
    c.ret.end = parse_number<int>(tok[5], source, lineno, "r_end");
    if (c.id != inst.size() + 1) parse_fail(source, lineno, "id", "ids must be contiguous from 1");
    inst.customers.push_back(c);
  }
  if (declared < 0) parse_fail(source, lineno, "header", "missing header");
  if (declared != inst.size())
    parse_fail(source, lineno, "n", "header declares " + std::to_string(declared) + " customers, found " +
                                        std::to_string(inst.size()));
  auto v = validate(inst);
  if (!v.empty()) {
    std::string where = v.front().customer ? "customer " + std::to_string(v.front().customer) : "instance";
    parse_fail(source, 0, where, v.front().what);
  }
  return inst;
}

void write_instance(const Instance& inst, std::ostream& out) {
  out << "carshare v1 n=" << inst.size() << " mA=" << inst.fleet_a << " mB=" << inst.fleet_b
      << " horizon=" << inst.horizon << '\n';
  if (inst.provenance)
    out << "# seed=" << inst.provenance->seed << " group=" << to_string(inst.provenance->group) << '\n';
  for (const auto& c : inst.customers) {
    out << c.id << ' ' << (c.outbound.origin == Station::A ? "AB" : "BA") << ' ' << c.outbound.start << ' '
        << c.outbound.end << ' ' << c.ret.start << ' ' << c.ret.end << '\n';
  }
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open " + path.string());
  return parse_instance(in, path.string());
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError("cannot write " + path.string());
  write_instance(inst, out);
  if (!out) throw InstanceError("write failed for " + path.string());
}

}  // namespace carshare
