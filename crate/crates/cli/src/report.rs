use std::fmt::Write as _;
use std::time::Duration;

use serde_json::{json, Map, Value};
use wkan_core::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Positive => "positive",
            Verdict::Negative => "negative",
        }
    }
}

/// The outcome of one command.
///
/// The JSON form is deterministic: keys are sorted and timings are left
/// out. Timings only appear in the text form.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub args: Value,
    pub verdict: Verdict,
    pub summary: String,
    pub result: Value,
    pub counterexample: Option<Value>,
    pub statistics: Map<String, Value>,
    pub budget_limit: u64,
    pub budget_used: u64,
    pub elapsed: Duration,
}

impl Report {
    pub fn new(verdict: Verdict, summary: impl Into<String>, result: Value) -> Self {
        Report {
            command: String::new(),
            args: Value::Null,
            verdict,
            summary: summary.into(),
            result,
            counterexample: None,
            statistics: Map::new(),
            budget_limit: 0,
            budget_used: 0,
            elapsed: Duration::ZERO,
        }
    }

    pub fn positive(summary: impl Into<String>, result: Value) -> Self {
        Self::new(Verdict::Positive, summary, result)
    }

    pub fn negative(summary: impl Into<String>, result: Value, counterexample: Value) -> Self {
        let mut r = Self::new(Verdict::Negative, summary, result);
        r.counterexample = Some(counterexample);
        r
    }

    pub fn stat(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.statistics.insert(key.to_string(), value.into());
        self
    }

    pub(crate) fn finish(
        mut self,
        command: &str,
        args: Value,
        budget: &Budget,
        elapsed: Duration,
    ) -> Self {
        self.command = command.to_string();
        self.args = args;
        self.budget_limit = budget.limit();
        self.budget_used = budget.used();
        self.elapsed = elapsed;
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Positive => 0,
            Verdict::Negative => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "args": self.args,
            "verdict": self.verdict.as_str(),
            "summary": self.summary,
            "result": self.result,
            "counterexample": self.counterexample,
            "statistics": self.statistics,
            "budget": {"limit": self.budget_limit, "used": self.budget_used},
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.verdict.as_str());
        let _ = writeln!(out, "  {}", self.summary);
        if let Some(cx) = &self.counterexample {
            let _ = writeln!(out, "  counterexample: {cx}");
        }
        for (k, v) in &self.statistics {
            let _ = writeln!(out, "  {k}: {v}");
        }
        let _ = writeln!(
            out,
            "  budget: {} of {} nodes",
            self.budget_used, self.budget_limit
        );
        let _ = writeln!(out, "  time: {:.2?}", self.elapsed);
        out
    }
}
