use std::fmt::Write;

use entcap_core::{CapacityResult, OptimizerArgument, Sign};

use crate::config::Resolved;
use crate::error::Result;
use crate::sweep::{evaluate, format_sig12};

pub fn run_point(r: &Resolved) -> Result<Vec<CapacityResult>> {
    r.directions
        .iter()
        .map(|d| evaluate(&r.params, r.method, d, &r.optimizer))
        .collect()
}

/// `key: value` lines, one block per direction.
pub fn format_result(r: &Resolved, res: &CapacityResult) -> String {
    let mut s = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(s, "{k}: {v}");
    };
    line("family", r.params.family.to_string());
    line("method", r.method.to_string());
    line("direction", res.direction.name().to_string());
    line("value", format_sig12(res.value));
    match &res.argument {
        OptimizerArgument::OptimalFamily { alpha, sign } => {
            line("alpha", format_sig12(*alpha));
            line(
                "sign",
                if *sign == Sign::Plus { "+" } else { "-" }.to_string(),
            );
        }
        OptimizerArgument::Appendix { angles } => {
            let list: Vec<String> = angles.iter().map(|a| format_sig12(*a)).collect();
            line("angles", list.join(" "));
        }
    }
    line("input_entanglement", format_sig12(res.input_entanglement));
    line("output_entanglement", format_sig12(res.output_entanglement));
    line("output_lower", format_sig12(res.output_interval.lower));
    line("output_upper", format_sig12(res.output_interval.upper));
    line("bound_gap", format_sig12(res.output_interval.gap()));
    line("tight", res.output_interval.tight.to_string());
    line("restarts", res.restarts_used.to_string());
    line("iterations", res.iterations.to_string());
    line("converged", res.converged.to_string());
    s
}
