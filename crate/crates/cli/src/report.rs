//! Output shapes shared by the subcommands.

use mscount_core::CountResult;
use serde::Serialize;

/// Stable report schema for `count`: one JSON object or one `key: value`
/// block. The text form is human-facing; the JSON field names are the
/// contract.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub model_count: String,
    pub mode: String,
    pub exact: bool,
    pub nodes_visited: u64,
    pub subtrees_pruned: u64,
}

impl From<CountResult> for Report {
    fn from(result: CountResult) -> Report {
        Report {
            model_count: result.model_count.to_string(),
            mode: result.mode.to_string(),
            exact: result.exact,
            nodes_visited: result.nodes_visited,
            subtrees_pruned: result.subtrees_pruned,
        }
    }
}

impl Report {
    pub fn render_text(&self) -> String {
        format!(
            "modelCount: {}\nmode: {}\nexact: {}\nnodesVisited: {}\nsubtreesPruned: {}\n",
            self.model_count, self.mode, self.exact, self.nodes_visited, self.subtrees_pruned
        )
    }

    pub fn render_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("report serializes");
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}
