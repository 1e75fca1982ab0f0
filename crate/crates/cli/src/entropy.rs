//! Map entropy and minimal output entropy of a channel read from JSON.

use std::path::Path;

use chanent::channel_file::ChannelSpec;
use chanent::channels::map_entropy;
use chanent::min_output::min_output_entropy;
use chanent::states::EntropyOrder;

use crate::config::{CliError, RunConfig};
use crate::output::{fmt_f, Table};

pub fn read_spec(path: &Path) -> Result<ChannelSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(ChannelSpec::from_json(&text)?)
}

/// Two-column table `quantity,value`. Named families also get their
/// closed-form Rényi-2 values and the deltas against them when `q = 2`.
pub fn run_entropy(spec: &ChannelSpec, cfg: &RunConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let channel = spec.build::<f64>()?;
    let q = cfg.q.unwrap_or(2.0);
    let order = EntropyOrder::new(q, cfg.base)?;
    let s_map = map_entropy(&channel, order);
    let r = min_output_entropy(&channel, order, &cfg.min_out_options(cfg.seed))?;

    let mut t = Table::new(&["quantity", "value"]);
    let mut put = |k: &str, v: String| t.push(vec![k.to_string(), v]);
    put("kind", spec.kind().into());
    put("dim", channel.dim().to_string());
    put("q", fmt_f(q));
    put("base", base_name(cfg).into());
    put("s_map", fmt_f(s_map));
    put("s_min", fmt_f(r.value));
    put("starts", r.starts_used.to_string());
    put("best_start", r.best_start.to_string());
    put("converged", r.converged.to_string());
    put("best_purity", fmt_f(r.best_purity));
    if q == 2.0 {
        if let Some(a) = spec.analytic_q2::<f64>()? {
            let s_map_exact = cfg.base.from_nats(a.s_map);
            let s_min_exact = cfg.base.from_nats(a.s_min);
            put("analytic_s_map", fmt_f(s_map_exact));
            put("analytic_s_min", fmt_f(s_min_exact));
            put("delta_s_map", fmt_f((s_map - s_map_exact).abs()));
            put("delta_s_min", fmt_f((r.value - s_min_exact).abs()));
        }
    }
    Ok(t)
}

pub fn base_name(cfg: &RunConfig) -> &'static str {
    match cfg.base {
        chanent::states::Base::Natural => "e",
        chanent::states::Base::Two => "2",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(t: &Table, key: &str) -> f64 {
        t.rows.iter().find(|r| r[0] == key).unwrap()[1]
            .parse()
            .unwrap()
    }

    #[test]
    fn depolarizing_file() {
        let spec = ChannelSpec::Depolarizing {
            dim: 2,
            lambda: 1.0 / 3.0,
        };
        let t = run_entropy(&spec, &RunConfig::default()).unwrap();
        assert!((value(&t, "s_map") - 3f64.ln()).abs() < 1e-10);
        assert!((value(&t, "s_min") - (9.0f64 / 5.0).ln()).abs() < 1e-8);
        assert!(value(&t, "delta_s_map") <= 1e-8);
        assert!(value(&t, "delta_s_min") <= 1e-8);
    }

    #[test]
    fn identity_kraus_file_and_base_two() {
        let spec = ChannelSpec::from_json(
            r#"{"kind":"kraus","dim":2,"operators":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#,
        )
        .unwrap();
        let t = run_entropy(&spec, &RunConfig::default()).unwrap();
        assert!(value(&t, "s_map").abs() < 1e-12);
        assert!(value(&t, "s_min").abs() < 1e-12);
        let spec = ChannelSpec::Pauli {
            weights: [0.5, 0.5, 0.0, 0.0],
        };
        let cfg = RunConfig {
            base: chanent::states::Base::Two,
            ..RunConfig::default()
        };
        let t = run_entropy(&spec, &cfg).unwrap();
        assert!((value(&t, "s_map") - 1.0).abs() < 1e-12);
        assert!(value(&t, "s_min").abs() < 1e-10);
    }
}
