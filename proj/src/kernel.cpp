#include "intensio/kernel.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <limits>
#include <map>
#include <numeric>

#include <omp.h>

#include "intensio/error.hpp"
#include "intensio/search.hpp"

namespace intensio::kernel {

namespace {

using Family = std::uint64_t;  // bit X set: the subset X of W is an image

constexpr Family bit(std::uint64_t subset) { return Family{1} << subset; }

template <typename Fn>
void for_bits(std::uint64_t mask, Fn fn) {
  while (mask != 0) {
    fn(static_cast<std::uint64_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
}

struct Entry {
  std::vector<WorldSet> images;          // one per relation
  std::vector<std::uint32_t> subsets;    // per group variable, bit i: relation i
  std::vector<Family> families;          // per group variable
};

struct Component {
  std::size_t n;
  std::size_t m;
  std::vector<std::vector<Entry>> entries;  // per world
  std::uint64_t assignments;
  std::uint64_t lanes;
  std::size_t words;
  std::uint64_t offset;
  // World permutations other than the identity, as inverses, and where each
  // permutation sends entry i of world w (at world pi(w)). Empty if too large.
  std::vector<std::vector<World>> inverse_perms;
  std::vector<std::vector<std::vector<std::uint32_t>>> moved;

  /// No world permutation maps the assignment to a smaller one.
  bool canonical(const std::size_t* idx) const {
    for (std::size_t p = 0; p < inverse_perms.size(); ++p) {
      for (std::size_t k = 0; k < n; ++k) {
        const World from = inverse_perms[p][k];
        const std::size_t image = moved[p][from][idx[from]];
        if (image < idx[k]) return false;
        if (image > idx[k]) break;
      }
    }
    return true;
  }
};

enum class TermKind : std::uint8_t { Var, Zero, One, Plus, Dot, Cap };

struct TermOp {
  TermKind kind;
  int a = -1, b = -1;
};

struct FormulaOp {
  Formula::Kind kind;
  int a = -1, b = -1, term = -1;
};

struct Program {
  std::vector<TermOp> terms;
  std::vector<FormulaOp> nodes;
  std::vector<int> roots;
  std::vector<int> inside_slot;  // per node: its subset table, or -1
  std::size_t inside_tables = 0;
  std::vector<bool> modal_term;  // terms indexing a box or diamond
};

class Compiler {
 public:
  Compiler(const std::vector<std::string>& props, const std::vector<std::string>& groups)
      : props_(props), groups_(groups) {}

  Program compile(std::span<const Formula> formulas) {
    for (const Formula& f : formulas) program_.roots.push_back(node(f));
    program_.inside_slot.assign(program_.nodes.size(), -1);
    program_.modal_term.assign(program_.terms.size(), false);
    for (const FormulaOp& op : program_.nodes) {
      if (op.kind != Formula::Kind::Box && op.kind != Formula::Kind::Dia) continue;
      program_.modal_term[static_cast<std::size_t>(op.term)] = true;
      int& slot = program_.inside_slot[static_cast<std::size_t>(op.a)];
      if (slot < 0) slot = static_cast<int>(program_.inside_tables++);
    }
    return std::move(program_);
  }

 private:
  const std::vector<std::string>& props_;
  const std::vector<std::string>& groups_;
  Program program_;
  std::map<Formula, int> node_ids_;
  std::map<GroupTerm, int> term_ids_;

  static int index_in(const std::vector<std::string>& names, const std::string& name, const char* what) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw EvalError(std::string("kernel has no ") + what + " '" + name + "'");
    return static_cast<int>(it - names.begin());
  }

  int term(const GroupTerm& t) {
    if (auto it = term_ids_.find(t); it != term_ids_.end()) return it->second;
    TermOp op;
    if (t.is_var()) {
      op = {TermKind::Var, index_in(groups_, t.name(), "group variable")};
    } else {
      switch (t.op()) {
        case Op::Zero: op = {TermKind::Zero}; break;
        case Op::One: op = {TermKind::One}; break;
        case Op::Plus: op = {TermKind::Plus, term(t.args()[0]), term(t.args()[1])}; break;
        case Op::Dot: op = {TermKind::Dot, term(t.args()[0]), term(t.args()[1])}; break;
        case Op::Cap: op = {TermKind::Cap, term(t.args()[0])}; break;
        default: throw EvalError("the kernel does not support '" + std::string(symbol(t.op())) + "'");
      }
    }
    program_.terms.push_back(op);
    const int id = static_cast<int>(program_.terms.size()) - 1;
    term_ids_.emplace(t, id);
    return id;
  }

  int node(const Formula& f) {
    if (auto it = node_ids_.find(f); it != node_ids_.end()) return it->second;
    FormulaOp op{f.kind()};
    switch (f.kind()) {
      case Formula::Kind::Top: break;
      case Formula::Kind::Prop: op.a = index_in(props_, f.name(), "proposition"); break;
      case Formula::Kind::Not: op.a = node(f.lhs()); break;
      case Formula::Kind::And:
        op.a = node(f.lhs());
        op.b = node(f.rhs());
        break;
      case Formula::Kind::Box:
      case Formula::Kind::Dia:
        op.term = term(f.term());
        op.a = node(f.lhs());
        break;
    }
    program_.nodes.push_back(op);
    const int id = static_cast<int>(program_.nodes.size()) - 1;
    node_ids_.emplace(f, id);
    return id;
  }
};

/// Per-thread evaluation of one component. Lanes hold proposition
/// valuations; when one assignment has fewer than 64 lanes, several
/// assignments share a word, one per slot of `lanes` bits.
class Evaluator {
 public:
  Evaluator(const Program& p, const Component& c, std::size_t prop_count, const ResourceCaps& caps)
      : p_(p), n_(c.n), words_(c.words), lanes_(c.lanes), caps_(caps) {
    slots_ = lanes_ >= 64 ? 1 : static_cast<std::size_t>(64 / lanes_);
    slot_mask_ = lanes_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes_) - 1;
    subsets_ = std::size_t{1} << n_;
    fam_.resize(p.terms.size() * slots_ * n_);
    union_.resize(p.terms.size() * n_);
    mask_.resize(p.terms.size() * n_ * subsets_);
    truth_.resize(p.nodes.size() * n_ * words_);
    inside_.resize(p.inside_tables * subsets_ * words_);
    // lane l gives prop i the world set (l >> (i * n)) & full; slots repeat the pattern
    patterns_.resize(prop_count * n_ * words_);
    for (std::size_t i = 0; i < prop_count; ++i) {
      for (std::size_t w = 0; w < n_; ++w) {
        const std::size_t shift = i * n_ + w;
        for (std::size_t j = 0; j < words_; ++j) {
          std::uint64_t word = 0;
          for (std::uint64_t b = 0; b < 64; ++b) {
            if (((j * 64 + b) >> shift) & 1U) word |= std::uint64_t{1} << b;
          }
          patterns_[(i * n_ + w) * words_ + j] = word;
        }
      }
    }
  }

  std::size_t slots() const { return slots_; }

  /// idx holds `used` assignments of n entry indices each. Sets the first
  /// failing (slot, lane) of each root.
  void evaluate(const std::vector<std::size_t>& idx, const Component& c, std::size_t used,
                std::vector<std::optional<std::pair<std::size_t, std::uint64_t>>>& fails) {
    compute_terms(idx, c, used);
    compute_nodes();
    const std::uint64_t valid =
        slots_ == 1 ? ~std::uint64_t{0}
                    : (used * lanes_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << (used * lanes_)) - 1);
    for (std::size_t r = 0; r < p_.roots.size(); ++r) {
      fails[r].reset();
      const std::size_t node = static_cast<std::size_t>(p_.roots[r]);
      for (std::size_t j = 0; j < words_; ++j) {
        std::uint64_t all = ~std::uint64_t{0};
        for (std::size_t w = 0; w < n_; ++w) all &= truth_[(node * n_ + w) * words_ + j];
        const std::uint64_t bad = ~all & valid;
        if (bad != 0) {
          const std::uint64_t g = j * 64 + static_cast<std::uint64_t>(std::countr_zero(bad));
          fails[r] = slots_ == 1 ? std::pair{std::size_t{0}, g} : std::pair{static_cast<std::size_t>(g / lanes_), g % lanes_};
          break;
        }
      }
    }
  }

 private:
  const Program& p_;
  std::size_t n_;
  std::size_t words_;
  std::uint64_t lanes_;
  const ResourceCaps& caps_;
  std::size_t slots_;
  std::uint64_t slot_mask_;
  std::size_t subsets_;
  std::vector<Family> fam_;          // term, slot, world
  std::vector<Family> union_;        // term, world: images over all slots
  std::vector<std::uint64_t> mask_;  // term, world, subset: lanes whose family has it
  std::vector<std::uint64_t> truth_;
  std::vector<std::uint64_t> patterns_;
  // per marked node and word: lanes where the node holds on all of subset X
  std::vector<std::uint64_t> inside_;

  Family dot(Family f, const Family* g) const {
    Family out = 0;
    for_bits(f, [&](std::uint64_t x) {
      std::uint64_t combos = 1;
      for_bits(x, [&](std::uint64_t j) { combos *= std::max<std::uint64_t>(1, std::popcount(g[j])); });
      if (combos > caps_.compose_combinations) {
        throw CapExceeded("composition needs " + std::to_string(combos) + " choice combinations");
      }
      Family partial = bit(0);
      for_bits(x, [&](std::uint64_t j) {
        const Family options = g[j] != 0 ? g[j] : bit(0);
        Family next = 0;
        for_bits(partial, [&](std::uint64_t s) { for_bits(options, [&](std::uint64_t y) { next |= bit(s | y); }); });
        partial = next;
      });
      out |= partial;
    });
    return out;
  }

  static Family closure(Family f) {
    bool grew = true;
    while (grew) {
      grew = false;
      for_bits(f, [&](std::uint64_t x) {
        for_bits(f, [&](std::uint64_t y) {
          if (!(f & bit(x & y))) {
            f |= bit(x & y);
            grew = true;
          }
        });
      });
    }
    return f;
  }

  void compute_terms(const std::vector<std::size_t>& idx, const Component& c, std::size_t used) {
    for (std::size_t s = 0; s < used; ++s) {
      for (std::size_t t = 0; t < p_.terms.size(); ++t) {
        const TermOp& op = p_.terms[t];
        Family* out = &fam_[(t * slots_ + s) * n_];
        const Family* a = op.a >= 0 ? &fam_[(static_cast<std::size_t>(op.a) * slots_ + s) * n_] : nullptr;
        const Family* b = op.b >= 0 ? &fam_[(static_cast<std::size_t>(op.b) * slots_ + s) * n_] : nullptr;
        for (std::size_t w = 0; w < n_; ++w) {
          switch (op.kind) {
            case TermKind::Var:
              out[w] = c.entries[w][idx[s * n_ + w]].families[static_cast<std::size_t>(op.a)];
              break;
            case TermKind::Zero: out[w] = 0; break;
            case TermKind::One: out[w] = bit(std::uint64_t{1} << w); break;
            case TermKind::Plus: out[w] = a[w] | b[w]; break;
            case TermKind::Dot: out[w] = dot(a[w], b); break;
            case TermKind::Cap: out[w] = closure(a[w]); break;
          }
        }
      }
    }
    for (std::size_t t = 0; t < p_.terms.size(); ++t) {
      if (!p_.modal_term[t]) continue;
      for (std::size_t w = 0; w < n_; ++w) {
        Family& u = union_[t * n_ + w];
        std::uint64_t* m = &mask_[(t * n_ + w) * subsets_];
        for_bits(u, [&](std::uint64_t x) { m[x] = 0; });
        u = 0;
        for (std::size_t s = 0; s < used; ++s) {
          const Family f = fam_[(t * slots_ + s) * n_ + w];
          const std::uint64_t lanes = slots_ == 1 ? ~std::uint64_t{0} : slot_mask_ << (s * lanes_);
          u |= f;
          for_bits(f, [&](std::uint64_t x) { m[x] |= lanes; });
        }
      }
    }
  }

  void compute_nodes() {
    const std::size_t width = n_ * words_;
    for (std::size_t k = 0; k < p_.nodes.size(); ++k) {
      const FormulaOp& op = p_.nodes[k];
      std::uint64_t* out = &truth_[k * width];
      const std::uint64_t* a = op.a >= 0 ? &truth_[static_cast<std::size_t>(op.a) * width] : nullptr;
      const std::uint64_t* b = op.b >= 0 ? &truth_[static_cast<std::size_t>(op.b) * width] : nullptr;
      switch (op.kind) {
        case Formula::Kind::Top:
          std::fill(out, out + width, ~std::uint64_t{0});
          break;
        case Formula::Kind::Prop:
          std::copy_n(&patterns_[static_cast<std::size_t>(op.a) * width], width, out);
          break;
        case Formula::Kind::Not:
          for (std::size_t i = 0; i < width; ++i) out[i] = ~a[i];
          break;
        case Formula::Kind::And:
          for (std::size_t i = 0; i < width; ++i) out[i] = a[i] & b[i];
          break;
        case Formula::Kind::Box:
        case Formula::Kind::Dia: {
          const std::size_t t = static_cast<std::size_t>(op.term);
          const std::uint64_t* in =
              &inside_[static_cast<std::size_t>(p_.inside_slot[static_cast<std::size_t>(op.a)]) * subsets_ * words_];
          for (std::size_t w = 0; w < n_; ++w) {
            const std::uint64_t* m = &mask_[(t * n_ + w) * subsets_];
            const Family u = union_[t * n_ + w];
            for (std::size_t j = 0; j < words_; ++j) {
              std::uint64_t acc;
              if (op.kind == Formula::Kind::Box) {
                acc = ~std::uint64_t{0};
                for_bits(u, [&](std::uint64_t x) { acc &= in[x * words_ + j] | ~m[x]; });
              } else {
                acc = 0;
                for_bits(u, [&](std::uint64_t x) { acc |= in[x * words_ + j] & m[x]; });
              }
              out[w * words_ + j] = acc;
            }
          }
          break;
        }
      }
      if (const int slot = p_.inside_slot[k]; slot >= 0) {
        std::uint64_t* in = &inside_[static_cast<std::size_t>(slot) * subsets_ * words_];
        std::fill(in, in + words_, ~std::uint64_t{0});
        for (std::size_t x = 1; x < subsets_; ++x) {
          const std::size_t low = static_cast<std::size_t>(std::countr_zero(x));
          for (std::size_t j = 0; j < words_; ++j) in[x * words_ + j] = in[(x & (x - 1)) * words_ + j] & out[low * words_ + j];
        }
      }
    }
  }
};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::uint64_t cap, const char* what) {
  if (a != 0 && b > cap / a) throw CapExceeded(std::string(what) + " exceed the valuation cap");
  return a * b;
}

}  // namespace

struct Search::Impl {
  TheoryKind theory;
  SearchBounds bounds;
  std::vector<std::string> props;
  std::vector<std::string> groups;
  ResourceCaps caps;
  std::vector<Component> components;
  std::uint64_t total = 0;

  std::vector<Entry> entries_for(std::size_t n, std::size_t m, World w) const {
    std::vector<WorldSet> allowed;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      if (theory == TheoryKind::CSL && !WorldSet(s).contains(w)) continue;
      allowed.push_back(WorldSet(s));
    }
    const std::size_t g = groups.size();
    std::uint64_t image_tuples = 1, subset_tuples = 1;
    for (std::size_t i = 0; i < m; ++i) image_tuples = checked_mul(image_tuples, allowed.size(), 1 << 24, "image tuples");
    for (std::size_t i = 0; i < g; ++i) subset_tuples = checked_mul(subset_tuples, std::uint64_t{1} << m, 1 << 24, "extent tuples");
    checked_mul(image_tuples, subset_tuples, 1 << 24, "per-world choices");

    std::vector<Entry> out;
    std::map<std::vector<Family>, std::size_t> seen;
    for (std::uint64_t it = 0; it < image_tuples; ++it) {
      std::vector<WorldSet> images(m);
      std::uint64_t rest = it;
      for (std::size_t i = m; i-- > 0;) {
        images[i] = allowed[rest % allowed.size()];
        rest /= allowed.size();
      }
      for (std::uint64_t st = 0; st < subset_tuples; ++st) {
        std::vector<std::uint32_t> subsets(g);
        std::vector<Family> fams(g, 0);
        std::uint64_t r2 = st;
        for (std::size_t v = g; v-- > 0;) {
          subsets[v] = static_cast<std::uint32_t>(r2 % (std::uint64_t{1} << m));
          r2 >>= m;
          for_bits(subsets[v], [&](std::uint64_t i) { fams[v] |= bit(images[i].bits()); });
        }
        if (seen.emplace(fams, out.size()).second) out.push_back(Entry{images, subsets, fams});
      }
    }
    return out;
  }

  static void add_symmetry(Component& c) {
    std::vector<World> pi(c.n);
    std::iota(pi.begin(), pi.end(), World{0});
    std::uint64_t perms = 1, entries = 0;
    for (std::size_t k = 2; k <= c.n; ++k) perms *= k;
    for (const auto& list : c.entries) entries += list.size();
    if (perms < 2 || (perms - 1) * entries > (std::uint64_t{1} << 22)) return;

    std::vector<std::map<std::vector<Family>, std::uint32_t>> index(c.n);
    for (World w = 0; w < c.n; ++w) {
      for (std::size_t i = 0; i < c.entries[w].size(); ++i) index[w].emplace(c.entries[w][i].families, static_cast<std::uint32_t>(i));
    }
    const std::size_t subsets = std::size_t{1} << c.n;
    while (std::next_permutation(pi.begin(), pi.end())) {
      std::vector<std::uint64_t> moved_subset(subsets);
      for (std::uint64_t x = 0; x < subsets; ++x) {
        for_bits(x, [&](std::uint64_t v) { moved_subset[x] |= std::uint64_t{1} << pi[v]; });
      }
      std::vector<World> inverse(c.n);
      for (World w = 0; w < c.n; ++w) inverse[pi[w]] = w;
      std::vector<std::vector<std::uint32_t>> moved(c.n);
      for (World w = 0; w < c.n; ++w) {
        for (const Entry& e : c.entries[w]) {
          std::vector<Family> fams(e.families.size(), 0);
          for (std::size_t v = 0; v < fams.size(); ++v) {
            for_bits(e.families[v], [&](std::uint64_t x) { fams[v] |= bit(moved_subset[x]); });
          }
          auto it = index[pi[w]].find(fams);
          if (it == index[pi[w]].end()) throw Error("kernel entries are not closed under world permutations");
          moved[w].push_back(it->second);
        }
      }
      c.inverse_perms.push_back(std::move(inverse));
      c.moved.push_back(std::move(moved));
    }
  }
};

Search::Search(TheoryKind theory, const SearchBounds& bounds, std::vector<std::string> props,
               std::vector<std::string> groups, ResourceCaps caps)
    : impl_(std::make_unique<Impl>()) {
  bounds.validate();
  if (theory == TheoryKind::BA) throw EvalError("the kernel does not support ba");
  if (bounds.max_worlds > kMaxWorlds) throw EvalError("the kernel supports at most 6 worlds");
  if (bounds.max_group_values != 0) throw EvalError("the kernel enumerates all group values");
  if (props.size() * bounds.max_worlds > 30) throw CapExceeded("too many proposition valuations");
  Impl& im = *impl_;
  im.theory = theory;
  im.bounds = bounds;
  im.props = std::move(props);
  im.groups = std::move(groups);
  im.caps = caps;
  for (std::size_t n = bounds.min_worlds; n <= bounds.max_worlds; ++n) {
    for (std::size_t m = 0; m <= bounds.max_relations; ++m) {
      Component c{n, m, {}, 1, std::uint64_t{1} << (im.props.size() * n), 0, im.total, {}, {}};
      c.words = static_cast<std::size_t>(std::max<std::uint64_t>(1, c.lanes / 64));
      for (World w = 0; w < n; ++w) {
        c.entries.push_back(im.entries_for(n, m, w));
        c.assignments = checked_mul(c.assignments, c.entries.back().size(), bounds.valuation_cap, "family assignments");
      }
      Impl::add_symmetry(c);
      const std::uint64_t size = checked_mul(c.assignments, c.lanes, bounds.valuation_cap, "models");
      if (size > bounds.valuation_cap - im.total) throw CapExceeded("models exceed the valuation cap");
      im.total += size;
      im.components.push_back(std::move(c));
    }
  }
}

Search::~Search() = default;
Search::Search(Search&&) noexcept = default;

std::uint64_t Search::size() const { return impl_->total; }

std::vector<std::optional<Hit>> Search::run(std::span<const Formula> formulas, int workers, bool reduce) const {
  const Impl& im = *impl_;
  for (const Formula& f : formulas) check_formula(f, signature_of(im.theory));
  const Program program = Compiler(im.props, im.groups).compile(formulas);
  const std::size_t count = formulas.size();
  std::vector<std::optional<Hit>> best(count);
  if (count == 0) return best;

  const auto start = std::chrono::steady_clock::now();
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

  // The smallest refuting assignment is the least of its orbit under world
  // permutations, so skipping non-canonical ones keeps every answer.
  for (std::size_t ci = 0; ci < im.components.size(); ++ci) {
    const Component& c = im.components[ci];
    constexpr std::uint64_t kChunk = 2048;
    const std::uint64_t chunks = (c.assignments + kChunk - 1) / kChunk;
    std::atomic<std::uint64_t> stop_after{kNone};  // skip chunks past this index
    std::atomic<bool> timed_out{false};
    std::exception_ptr error;

#pragma omp parallel num_threads(threads)
    {
      Evaluator ev(program, c, im.props.size(), im.caps);
      const std::size_t slots = ev.slots();
      std::vector<std::optional<std::pair<std::size_t, std::uint64_t>>> fails(count);
      std::vector<std::size_t> idx(c.n), pack(slots * c.n);
      std::vector<std::uint64_t> pack_assignment(slots);
#pragma omp for schedule(dynamic, 1)
      for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
        const std::uint64_t lo = chunk * kChunk;
        const std::uint64_t hi = std::min(c.assignments, lo + kChunk);
        if (c.offset + lo * c.lanes > stop_after.load() || timed_out.load()) continue;
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > im.bounds.time_cap_seconds) {
          timed_out = true;
          continue;
        }
        std::vector<std::optional<Hit>> local(count);
        std::size_t used = 0;
        const auto flush = [&] {
          ev.evaluate(pack, c, used, fails);
          for (std::size_t r = 0; r < count; ++r) {
            if (!fails[r] || local[r]) continue;
            const std::uint64_t a = pack_assignment[fails[r]->first];
            local[r] = Hit{ci, a, fails[r]->second, c.offset + a * c.lanes + fails[r]->second};
          }
          used = 0;
        };
        try {
          std::uint64_t rest = lo;
          for (std::size_t w = c.n; w-- > 0;) {
            idx[w] = static_cast<std::size_t>(rest % c.entries[w].size());
            rest /= c.entries[w].size();
          }
          for (std::uint64_t a = lo; a < hi; ++a) {
            if (!reduce || c.canonical(idx.data())) {
              std::copy(idx.begin(), idx.end(), pack.begin() + static_cast<std::ptrdiff_t>(used * c.n));
              pack_assignment[used++] = a;
              if (used == slots) flush();
            }
            for (std::size_t w = c.n; w-- > 0;) {
              if (++idx[w] < c.entries[w].size()) break;
              idx[w] = 0;
            }
          }
          if (used > 0) flush();
        } catch (...) {
#pragma omp critical(kernel_error)
          if (!error) error = std::current_exception();
          timed_out = true;
        }
#pragma omp critical(kernel_merge)
        {
          bool all = true;
          std::uint64_t worst = 0;
          for (std::size_t r = 0; r < count; ++r) {
            if (local[r] && (!best[r] || local[r]->index < best[r]->index)) best[r] = local[r];
            if (!best[r]) {
              all = false;
            } else {
              worst = std::max(worst, best[r]->index);
            }
          }
          if (all) stop_after = worst;
        }
      }
    }
    if (error) std::rethrow_exception(error);
    if (timed_out) throw CapExceeded("search exceeded the time cap");
    if (std::all_of(best.begin(), best.end(), [](const auto& h) { return h.has_value(); })) break;
  }
  return best;
}

RelationalModel Search::model(const Hit& hit) const {
  const Impl& im = *impl_;
  const Component& c = im.components.at(hit.component);
  std::vector<std::size_t> idx(c.n);
  std::uint64_t rest = hit.assignment;
  for (std::size_t w = c.n; w-- > 0;) {
    idx[w] = static_cast<std::size_t>(rest % c.entries[w].size());
    rest /= c.entries[w].size();
  }
  RelationalFrame fr(c.n, im.theory);
  for (std::size_t i = 0; i < c.m; ++i) {
    std::vector<WorldSet> images(c.n);
    for (World w = 0; w < c.n; ++w) images[w] = c.entries[w][idx[w]].images[i];
    fr.add_relation("r" + std::to_string(i), images);
  }
  RelationalModel model{fr, {}, {}};
  for (std::size_t v = 0; v < im.groups.size(); ++v) {
    Intension f = Intension::empty(c.n);
    for (World w = 0; w < c.n; ++w) {
      for_bits(c.entries[w][idx[w]].subsets[v], [&](std::uint64_t i) { f.extent[w].push_back(static_cast<RelationId>(i)); });
    }
    model.groups[im.groups[v]] = f;
  }
  for (std::size_t i = 0; i < im.props.size(); ++i) {
    model.props[im.props[i]] = WorldSet((hit.lane >> (i * c.n)) & WorldSet::full(c.n).bits());
  }
  return model;
}

}  // namespace intensio::kernel
