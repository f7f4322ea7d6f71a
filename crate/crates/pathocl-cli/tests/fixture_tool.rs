//! Regenerates the replay fixtures from the canned-completion table.
//!
//! The fixtures are content-addressed by prompt hash, so they go stale
//! whenever the prompt templates, the models, the specification texts or
//! the ranking change. Run this after such a change:
//!
//! ```text
//! cargo test -p pathocl-cli --test fixture_tool -- --ignored
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use pathocl_core::llm::bundle_key;
use pathocl_core::model::{load_model, UmlModel};
use pathocl_core::nlp::{extract_uml_elements, load_specs, preprocess};
use pathocl_core::pathgen::{build_graph, default_max_len, enumerate_simple_paths};
use pathocl_core::prompt::{craft_full_model_prompt, craft_prompt, PromptBundle};
use pathocl_core::rank::{rank_paths, Metric};

fn fixtures_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"))
}

/// Canned completions: (spec id, technique, rank) -> completion text.
/// "pathocl" rows cover the top-3 Jaccard prompts; "uml" rows are the
/// whole-model baseline.
const CANNED: &[(&str, &str, u32, &str)] = &[
    // airport, path-based
    ("ap-001", "pathocl", 1, "context Flight inv: self.passengers->size() <= 1000"),
    ("ap-001", "pathocl", 2, "context Flight inv: self.maxNrPassenger <= 1000"),
    ("ap-001", "pathocl", 3, "context Flight inv: self.passengers->size() <= self.maxNrPassenger"),
    ("ap-002", "pathocl", 1, "context Flight inv: self.duration > 0"),
    ("ap-002", "pathocl", 2, "context Flight inv: duration > 0"),
    ("ap-002", "pathocl", 3, "context Flight inv: self.length > 0"),
    // airport, whole-model baseline
    ("ap-001", "uml", 1, "context Flight inv: self.passengers->size() <= 1000"),
    ("ap-002", "uml", 1, "context Flight inv: self.duration >= 0"),
    // royal & loyal, path-based
    ("rl-001", "pathocl", 1, "context Customer inv: self.age() >= 18"),
    ("rl-001", "pathocl", 2, "context Customer inv: self.birthday > 18"),
    ("rl-001", "pathocl", 3, "context Customer inv: self.age() >= 0"),
    ("rl-002", "pathocl", 1, "context LoyaltyProgram inv: self.levels->select(l | l.active)->notEmpty()"),
    ("rl-002", "pathocl", 2, "context LoyaltyProgram inv: self.levels->notEmpty()"),
    ("rl-002", "pathocl", 3, "context LoyaltyProgram::enroll(c: Customer) inv: true"),
    ("rl-003", "pathocl", 1, "context CustomerCard inv: self.transactions->forAll(t | t.points > 0)"),
    ("rl-003", "pathocl", 2, "context Membership inv: self.card->select(c | c.valid)->notEmpty()"),
    ("rl-003", "pathocl", 3, "context CustomerCard inv: transactions->forAll(t | t.points > 0)"),
    ("rl-004", "pathocl", 1, "context Transaction inv: self.programs->notEmpty()"),
    ("rl-004", "pathocl", 2, "context Transaction inv: self.card.owner.programs->notEmpty()"),
    ("rl-004", "pathocl", 3, "context LoyaltyProgram inv: self.participants->forAll(c | self.enroll(c, 0) = 1)"),
    // royal & loyal, whole-model baseline
    ("rl-001", "uml", 1, "context Customer inv: self.age >= 18"),
    ("rl-002", "uml", 1, "context LoyaltyProgram inv: self.levels->notEmpty()"),
    ("rl-003", "uml", 1, "context CustomerCard inv: self.transactions->collect(t | t.points)->sum() > 0"),
    ("rl-004", "uml", 1, "context Transaction inv: self.programs->size() = 1"),
];

fn canned_text(spec_id: &str, technique: &str, rank: u32) -> &'static str {
    CANNED
        .iter()
        .find(|(id, tech, r, _)| *id == spec_id && *tech == technique && *r == rank)
        .map(|(_, _, _, text)| *text)
        .unwrap_or_else(|| panic!("no canned completion for {spec_id}/{technique}/{rank}"))
}

fn top3_bundles(model: &UmlModel, spec_text: &str) -> Vec<(u32, PromptBundle)> {
    let graph = build_graph(model);
    let paths =
        enumerate_simple_paths(&graph, default_max_len(graph.node_count())).expect("paths");
    let tokens = preprocess(spec_text).expect("tokens");
    let elements = extract_uml_elements(&tokens);
    rank_paths(model, &paths, &elements, &Metric::Jaccard, 3)
        .expect("ranking")
        .into_iter()
        .map(|r| {
            let bundle = craft_prompt(model, &r.path, spec_text).expect("prompt");
            (r.rank as u32, bundle)
        })
        .collect()
}

#[derive(serde::Serialize)]
struct Entry {
    text: String,
    input_tokens: u64,
    output_tokens: u64,
}

fn entry(text: &str, bundle: &PromptBundle) -> Entry {
    Entry {
        text: text.to_string(),
        input_tokens: bundle.approx_tokens,
        output_tokens: (text.chars().count() as u64).div_ceil(4),
    }
}

fn regenerate(model_file: &str, specs_file: &str, out_file: &str) {
    let dir = fixtures_dir();
    let model = load_model(dir.join(model_file)).expect("model fixture");
    let specs = load_specs(dir.join(specs_file)).expect("specs fixture");
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    for spec in &specs {
        for (rank, bundle) in top3_bundles(&model, &spec.text) {
            let text = canned_text(&spec.id, "pathocl", rank);
            entries.insert(bundle_key(&bundle), entry(text, &bundle));
        }
        let baseline = craft_full_model_prompt(&model, &spec.text).expect("baseline prompt");
        let text = canned_text(&spec.id, "uml", 1);
        entries.insert(bundle_key(&baseline), entry(text, &baseline));
    }
    let json = serde_json::to_string_pretty(&entries).expect("fixture serializes");
    std::fs::write(dir.join(out_file), format!("{json}\n")).expect("fixture written");
    println!("wrote {out_file}: {} entries", entries.len());
}

#[test]
#[ignore = "rewrites fixtures/*.replay.json"]
fn regenerate_replay_fixtures() {
    regenerate("airport.model.json", "airport.specs.jsonl", "airport.replay.json");
    regenerate(
        "royal_loyal.model.json",
        "royal_loyal.specs.jsonl",
        "royal_loyal.replay.json",
    );
}
