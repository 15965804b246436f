//! Generates the bundled sample corpus (`sample/records.jsonl`).
//!
//! The records are synthetic: three invented research themes, each with its
//! own word bank, plus Chinese records that exercise the lexicon-driven
//! tokenizer. Every fourth document borrows words from the next theme so the
//! co-occurrence network has something to show. Generation is deterministic —
//! rerunning reproduces the file byte for byte.
//!
//! Run from the workspace root:
//!
//! ```text
//! cargo run -p topicmine-cli --example make_sample
//! ```

use std::fmt::Write as _;
use std::fs;

use topicmine::corpus::{Language, RawRecord};

const NUM_RECORDS: usize = 48;

/// English word banks: numerics, storage systems, governance.
const EN_THEMES: [&[&str]; 3] = [
    &[
        "solver", "mesh", "boundary", "gradient", "refinement", "convergence", "lattice",
        "residual", "stencil", "jacobian", "preconditioner", "timestep", "vorticity",
        "turbulence", "discretization", "manifold",
    ],
    &[
        "index", "query", "cache", "storage", "shard", "replica", "compaction", "latency",
        "throughput", "schema", "transaction", "snapshot", "journal", "partition", "cursor",
        "checksum",
    ],
    &[
        "rule", "policy", "audit", "validation", "constraint", "workflow", "approval",
        "checklist", "clause", "evidence", "waiver", "signoff", "registry", "escalation",
        "exemption", "provision",
    ],
];

/// Chinese word banks for the same three themes; multi-character entries are
/// listed in `sample/lexicon.txt` so forward maximum matching keeps them
/// whole.
const ZH_THEMES: [&[&str]; 3] = [
    &["网格剖分", "求解器", "边界条件", "收敛判据", "梯度", "残差", "离散格式", "时间步长"],
    &["数据索引", "缓存策略", "查询计划", "分片副本", "事务", "快照", "日志合并", "校验和"],
    &["规则引擎", "审计日志", "审批流程", "合规检查", "约束", "证据", "豁免条款", "登记表"],
];

const EN_GLUE: [&str; 6] = ["the", "of", "and", "in", "for", "with"];
const ZH_GLUE: [&str; 4] = ["的", "和", "在", "了"];

/// SplitMix64: tiny, seedable, and stable across platforms and releases.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    fn pick<'a>(&mut self, words: &[&'a str]) -> &'a str {
        words[self.below(words.len())]
    }
}

/// Pick a content word for a document of `theme`; mixed documents borrow
/// from the next theme about a third of the time.
fn content_word<'a>(
    rng: &mut SplitMix,
    banks: &[&[&'a str]; 3],
    theme: usize,
    mixed: bool,
) -> &'a str {
    let bank = if mixed && rng.below(3) == 0 {
        banks[(theme + 1) % 3]
    } else {
        banks[theme]
    };
    rng.pick(bank)
}

fn english_sentence(rng: &mut SplitMix, theme: usize, mixed: bool) -> String {
    let mut sentence = String::new();
    let clauses = 2 + rng.below(2);
    for clause in 0..clauses {
        if clause > 0 {
            sentence.push(' ');
            sentence.push_str(rng.pick(&EN_GLUE));
        }
        for _ in 0..(2 + rng.below(3)) {
            if !sentence.is_empty() {
                sentence.push(' ');
            }
            sentence.push_str(content_word(rng, &EN_THEMES, theme, mixed));
        }
    }
    sentence.push('.');
    sentence
}

fn english_abstract(rng: &mut SplitMix, theme: usize, mixed: bool) -> String {
    let mut text = String::new();
    for sentence in 0..6 {
        if sentence > 0 {
            text.push(' ');
        }
        text.push_str(&english_sentence(rng, theme, mixed));
    }
    text
}

fn chinese_abstract(rng: &mut SplitMix, theme: usize, mixed: bool) -> String {
    let mut text = String::new();
    for position in 0..24 {
        if position > 0 && rng.below(3) == 0 {
            text.push_str(rng.pick(&ZH_GLUE));
        }
        text.push_str(content_word(rng, &ZH_THEMES, theme, mixed));
    }
    text.push('。');
    text
}

fn title(rng: &mut SplitMix, theme: usize, language: Language) -> String {
    match language {
        Language::Zh => format!("{}与{}", rng.pick(ZH_THEMES[theme]), rng.pick(ZH_THEMES[theme])),
        _ => format!(
            "{} {} {}",
            rng.pick(EN_THEMES[theme]),
            rng.pick(EN_THEMES[theme]),
            "analysis"
        ),
    }
}

fn main() {
    let mut rng = SplitMix(0x5AFE_C0DE);
    let mut out = String::new();

    for i in 0..NUM_RECORDS {
        let theme = i % 3;
        let mixed = i % 4 == 3;
        let language = if i % 5 == 4 { Language::Zh } else { Language::En };
        let record = RawRecord {
            id: format!("p{:02}", i + 1),
            year: 2013 + (i as i32 % 8),
            language,
            title: title(&mut rng, theme, language),
            abstract_text: match language {
                Language::Zh => chinese_abstract(&mut rng, theme, mixed),
                _ => english_abstract(&mut rng, theme, mixed),
            },
        };
        let line = serde_json::to_string(&record).expect("record serialization cannot fail");
        let _ = writeln!(out, "{line}");
    }

    fs::write("sample/records.jsonl", out).expect("write sample/records.jsonl");
    println!("wrote sample/records.jsonl ({NUM_RECORDS} records)");
}
