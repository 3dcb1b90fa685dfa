#include "fixtures.hpp"

#include <algorithm>

#include "heisttrace/rng.hpp"

namespace heisttrace::testing {

Address mk_addr(std::uint32_t i) {
    Address a{};
    for (int b = 0; b < 4; ++b)
        a.bytes[19 - b] = static_cast<std::uint8_t>((i >> (8 * b)) & 0xff);
    return a;
}

TxHash mk_hash(std::uint32_t i) {
    TxHash h{};
    for (int b = 0; b < 4; ++b)
        h.bytes[31 - b] = static_cast<std::uint8_t>((i >> (8 * b)) & 0xff);
    return h;
}

Transaction mk_eth_tx(std::uint32_t hash_id, const Address& from, const Address& to,
                      const std::string& amount, std::int64_t ts, std::int64_t block) {
    Transaction t;
    t.tx_hash = mk_hash(hash_id);
    t.kind = TxKind::External;
    t.from = from;
    t.to = to;
    t.asset = AssetRef::ether();
    t.amount = Decimal::parse(amount);
    t.timestamp = ts;
    t.block = block;
    return t;
}

Transaction mk_token_tx(std::uint32_t hash_id, const Address& from, const Address& to,
                        const Address& contract, const std::string& amount, std::int64_t ts,
                        std::int64_t block) {
    Transaction t;
    t.tx_hash = mk_hash(hash_id);
    t.kind = TxKind::TokenTransfer;
    t.from = from;
    t.to = to;
    t.asset = AssetRef::erc20(contract, std::nullopt, 18);
    t.amount = Decimal::parse(amount);
    t.timestamp = ts;
    t.block = block;
    return t;
}

WalkthroughFixture make_walkthrough() {
    WalkthroughFixture fx;
    fx.p0 = mk_addr(1);
    fx.a1 = mk_addr(2);
    fx.a2 = mk_addr(3);
    fx.b1 = mk_addr(4);
    fx.c1 = mk_addr(5);
    fx.c2 = mk_addr(6);
    fx.c3 = mk_addr(7);
    fx.c4 = mk_addr(8);
    fx.d1 = mk_addr(9);
    fx.e = mk_addr(10);
    fx.svc1 = mk_addr(11);
    fx.svc2 = mk_addr(12);

    std::vector<Transaction> txs = {
        // the busy account's history with the exchange, long before the case
        mk_eth_tx(14, fx.e, fx.svc1, "10.0", 100, 1),
        mk_eth_tx(15, fx.svc1, fx.e, "10.0", 200, 2),
        mk_eth_tx(16, fx.e, fx.svc1, "5.0", 300, 3),
        mk_eth_tx(17, fx.svc1, fx.e, "5.0", 400, 4),
        // placement fans out, including dust and a labeled exit
        mk_eth_tx(1, fx.p0, fx.a1, "5.0", 1000, 5),
        mk_eth_tx(2, fx.p0, fx.a2, "3.0", 1100, 6),
        mk_eth_tx(3, fx.p0, fx.d1, "0.005", 1200, 7),
        mk_eth_tx(4, fx.p0, fx.svc1, "1.0", 1300, 8),
        // layer 1: split, dust, labeled exit
        mk_eth_tx(5, fx.a1, fx.b1, "2.5", 2000, 9),
        mk_eth_tx(6, fx.a1, fx.d1, "0.005", 2100, 10),
        mk_eth_tx(7, fx.a1, fx.svc2, "1.0", 2200, 11),
        mk_eth_tx(8, fx.a2, fx.b1, "1.5", 2300, 12),
        mk_eth_tx(9, fx.a2, fx.e, "2.0", 2400, 13),
        // dust recipient moving trifling amounts on its own
        mk_eth_tx(13, fx.d1, fx.a2, "0.001", 2500, 14),
        // layer 2 fan-out that trips the layer-size cap
        mk_eth_tx(10, fx.b1, fx.c1, "1.0", 3000, 15),
        mk_eth_tx(11, fx.b1, fx.c2, "0.9", 3100, 16),
        mk_eth_tx(12, fx.b1, fx.c3, "0.8", 3200, 17),
        mk_eth_tx(20, fx.b1, fx.c4, "0.7", 3300, 18),
        // busy-account traffic outside the service window
        mk_eth_tx(18, fx.e, fx.svc1, "1.0", 900000, 19),
        mk_eth_tx(19, fx.d1, fx.e, "0.8", 1300000, 20),
    };
    fx.store = LedgerStore::build(std::move(txs));

    fx.lib.add(fx.svc1, {"Binance", LabelCategory::CEX});
    fx.lib.add(fx.svc2, {"Tornado.Cash", LabelCategory::Mixing});

    fx.spec.name = "walkthrough";
    fx.spec.case_type = CaseType::CexHack;
    fx.spec.year = 2021;
    fx.spec.placement = {fx.p0};
    fx.spec.params.max_depth = 20;
    fx.spec.params.max_layer_size = 4;
    fx.spec.params.dirty_threshold = Decimal::parse("0.01");
    fx.spec.params.service_tx_threshold = 6;

    fx.expect_layering = {fx.a1, fx.a2, fx.b1};
    fx.expect_integration = {fx.svc1, fx.svc2, fx.e};
    fx.expect_tx_ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 20};
    fx.expect_depths = {{fx.p0, 0},   {fx.a1, 1},   {fx.a2, 1}, {fx.b1, 2},
                        {fx.svc1, 1}, {fx.svc2, 2}, {fx.e, 2}};
    fx.expect_frontier = {{fx.c1, 3}, {fx.c2, 3}, {fx.c3, 3}, {fx.c4, 3}};
    return fx;
}

PlantedCase make_planted_case(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PlantedCase pc;

    const int layers = 3 + static_cast<int>(uniform_index(rng, 6));       // 3..8
    const int placements = 1 + static_cast<int>(uniform_index(rng, 2));   // 1..2

    std::uint32_t next_id = 1;
    auto fresh = [&] { return mk_addr(next_id++); };

    std::vector<Address> placement;
    for (int i = 0; i < placements; ++i) placement.push_back(fresh());

    std::vector<std::vector<Address>> layer_nodes(layers + 1);
    layer_nodes[0] = placement;
    for (int l = 1; l <= layers; ++l) {
        const int width = 2 + static_cast<int>(uniform_index(rng, 4));  // 2..5
        for (int i = 0; i < width; ++i) {
            layer_nodes[l].push_back(fresh());
            pc.expect_layering.insert(layer_nodes[l].back());
        }
    }
    Address exchange = fresh();
    Address service = fresh();
    pc.expect_integration = {exchange, service};

    static const LabelCategory kServiceCats[] = {
        LabelCategory::CEX,     LabelCategory::DEX,    LabelCategory::CrossChain,
        LabelCategory::Lending, LabelCategory::Mixing, LabelCategory::OtherService};
    pc.lib.add(service, {"exit", kServiceCats[uniform_index(rng, 6)]});

    std::vector<Transaction> txs;
    std::uint32_t hash_id = 1;
    const std::int64_t base_ts = 1'600'000'000;
    auto amount_str = [&](int lo_cents, int hi_cents) {
        auto cents = lo_cents + static_cast<int>(uniform_index(
                                    rng, static_cast<std::uint64_t>(hi_cents - lo_cents + 1)));
        return Decimal::from_units(cents, 2).to_string();
    };
    auto push_tx = [&](const Address& from, const Address& to, const std::string& amount,
                       std::int64_t ts) {
        txs.push_back(mk_eth_tx(hash_id++, from, to, amount, ts, ts));  // block := ts
    };

    // layered flows: every node receives 1-2 parents (merges); parents fan
    // out to multiple children (splits) as a byproduct
    for (int l = 1; l <= layers; ++l) {
        const std::int64_t layer_ts = base_ts + static_cast<std::int64_t>(l) * 10'000;
        int sub = 0;
        for (const auto& node : layer_nodes[l]) {
            const auto& parents = layer_nodes[l - 1];
            const int parent_count = 1 + static_cast<int>(uniform_index(rng, 2));
            std::set<std::size_t> chosen;
            for (int p = 0; p < parent_count; ++p)
                chosen.insert(uniform_index(rng, parents.size()));
            for (auto pi : chosen)
                push_tx(parents[pi], node, amount_str(50, 500), layer_ts + sub++);
        }
    }

    // terminal layer cashes out into the labeled service and the busy
    // unlabeled exchange
    const std::int64_t exit_ts = base_ts + static_cast<std::int64_t>(layers + 1) * 10'000;
    {
        int sub = 0;
        for (const auto& node : layer_nodes[layers]) {
            push_tx(node, exchange, amount_str(100, 300), exit_ts + sub++);
            if (uniform_index(rng, 2) == 0)
                push_tx(node, service, amount_str(100, 300), exit_ts + sub++);
        }
        // at least one flow into the labeled service
        push_tx(layer_nodes[layers].front(), service, amount_str(100, 300), exit_ts + sub++);
    }

    // dust distractors: tainted nodes leak sub-threshold amounts to fresh
    // addresses that must end up nowhere
    const int dusts = 1 + static_cast<int>(uniform_index(rng, 3));
    for (int i = 0; i < dusts; ++i) {
        const int l = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(layers)));
        const auto& nodes = layer_nodes[l];
        const auto& source = nodes[uniform_index(rng, nodes.size())];
        auto dust_amount = Decimal::from_units(
            3 + static_cast<int>(uniform_index(rng, 6)), 3);  // 0.003..0.008 < 0.01
        push_tx(source, fresh(), dust_amount.to_string(),
                base_ts + static_cast<std::int64_t>(l) * 10'000 + 5'000);
    }

    // the exchange's unrelated high-volume history with clean counterparties
    {
        const std::size_t noise = 1005;
        std::vector<Address> partners;
        for (int i = 0; i < 7; ++i) partners.push_back(fresh());
        for (std::size_t i = 0; i < noise; ++i) {
            const auto& partner = partners[uniform_index(rng, partners.size())];
            const std::int64_t ts = 1'000'000 + static_cast<std::int64_t>(i) * 13;
            if (i % 2 == 0)
                push_tx(exchange, partner, "1.0", ts);
            else
                push_tx(partner, exchange, "1.0", ts);
        }
    }

    // clean background flows that tracing must never touch
    {
        std::vector<Address> clean;
        for (int i = 0; i < 6; ++i) clean.push_back(fresh());
        for (int i = 0; i < 12; ++i) {
            const auto& from = clean[uniform_index(rng, clean.size())];
            const auto& to = clean[uniform_index(rng, clean.size())];
            push_tx(from, to, amount_str(50, 500),
                    base_ts + 1'000 + i * 17);
        }
    }

    pc.store = LedgerStore::build(std::move(txs));
    pc.spec.name = "planted-" + std::to_string(seed);
    pc.spec.case_type = CaseType::CexHack;
    pc.spec.year = 2021;
    pc.spec.placement = placement;
    return pc;
}

FlowGraph random_multidigraph(std::uint64_t seed, std::uint32_t nodes, std::size_t edges) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> list;
    list.reserve(edges);
    for (std::size_t i = 0; i < edges; ++i) {
        auto u = static_cast<std::uint32_t>(uniform_index(rng, nodes));
        auto v = static_cast<std::uint32_t>(uniform_index(rng, nodes));
        list.emplace_back(u, v);
    }
    return FlowGraph::from_edge_list(nodes, list);
}

FlowGraph random_simple_digraph(std::uint64_t seed, std::uint32_t nodes, std::size_t edges) {
    std::mt19937_64 rng(seed);
    std::set<std::pair<std::uint32_t, std::uint32_t>> set;
    std::size_t attempts = 0;
    while (set.size() < edges && attempts < edges * 20) {
        ++attempts;
        auto u = static_cast<std::uint32_t>(uniform_index(rng, nodes));
        auto v = static_cast<std::uint32_t>(uniform_index(rng, nodes));
        if (u != v) set.insert({u, v});
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> list(set.begin(), set.end());
    return FlowGraph::from_edge_list(nodes, list);
}

BipartiteGraph random_bipartite(std::uint64_t seed, std::uint32_t senders,
                                std::uint32_t recipients, double edge_prob, double alpha) {
    std::mt19937_64 rng(seed);
    std::vector<Address> us, vs;
    for (std::uint32_t i = 0; i < senders; ++i) us.push_back(mk_addr(1000 + i));
    for (std::uint32_t i = 0; i < recipients; ++i) vs.push_back(mk_addr(2000 + i));
    std::vector<BipartiteGraph::Edge> edges;
    for (std::uint32_t u = 0; u < senders; ++u)
        for (std::uint32_t v = 0; v < recipients; ++v)
            if (uniform_unit(rng) < edge_prob) {
                BipartiteGraph::Edge e;
                e.u = u;
                e.v = senders + v;
                e.weight = static_cast<double>(1 + uniform_index(rng, 3));  // 1..3
                e.tx_count = 1;
                edges.push_back(e);
            }
    std::vector<double> susp(senders + recipients, 0.0);
    for (auto& s : susp)
        if (uniform_unit(rng) < 0.2) s = alpha;
    return BipartiteGraph(std::move(us), std::move(vs), std::move(edges), std::move(susp));
}

BipartiteGraph planted_block(std::uint32_t a, std::uint32_t b, std::uint32_t extras,
                             bool pendant, double alpha) {
    // extras split between the two sides; they carry no block edges
    const std::uint32_t extra_u = extras / 2;
    const std::uint32_t extra_v = extras - extra_u;
    std::vector<Address> us, vs;
    for (std::uint32_t i = 0; i < a + extra_u; ++i) us.push_back(mk_addr(1000 + i));
    for (std::uint32_t i = 0; i < b + extra_v; ++i) vs.push_back(mk_addr(2000 + i));
    const std::uint32_t m = a + extra_u;
    std::vector<BipartiteGraph::Edge> edges;
    for (std::uint32_t i = 0; i < a; ++i)
        for (std::uint32_t j = 0; j < b; ++j) edges.push_back({i, m + j, 1.0, 1});
    if (pendant && extra_u > 0) edges.push_back({a, m + 0, 1.0, 1});  // one light tie-in
    std::vector<double> susp(us.size() + vs.size(), 0.0);
    if (alpha > 0) {
        for (std::uint32_t i = 0; i < a; ++i) susp[i] = alpha;
        for (std::uint32_t j = 0; j < b; ++j) susp[m + j] = alpha;
    }
    return BipartiteGraph(std::move(us), std::move(vs), std::move(edges), std::move(susp));
}

std::vector<std::int64_t> power_law_sample(std::uint64_t seed, std::size_t n, double alpha) {
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = uniform_unit(rng);
        if (u <= 0) u = 1e-18;
        // continuous Pareto with x_min = 1; flooring keeps the tail exact at
        // integer cut points
        const double x = std::pow(u, -1.0 / (alpha - 1.0));
        out.push_back(static_cast<std::int64_t>(std::min(x, 1e15)));
    }
    return out;
}

}  // namespace heisttrace::testing
