//! `haulplan`: solve and validate haulage scenarios through the service.
//!
//! Without `--server` an embedded service is started on a loopback port for
//! the duration of the command.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use haulplan_client::{Client, ClientError};
use haulplan_core::scenario::solve::Status;
use haulplan_core::scenario::ResultSet;

#[derive(Parser)]
#[command(version, about = "Turntable and reverse-approach haulage path planner")]
struct Cli {
    /// Base URL of a running haulplan service.
    #[arg(long, global = true)]
    server: Option<String>,
    /// Log requests and solver activity to standard error.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan both variants of every route and cost them.
    Solve {
        #[arg(long)]
        scenario: PathBuf,
        /// Write the result set here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG overlay of the solved paths.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Polyline sampling step in meters.
        #[arg(long)]
        sample_step: Option<f64>,
    },
    /// Check a scenario file without solving it.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Run the HTTP service in the foreground.
    Serve {
        /// Defaults to HAULPLAN_PORT, then 8787.
        #[arg(long)]
        port: Option<u16>,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

enum Failure {
    Scenario(ClientError),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Self {
        if e.is_scenario_error() {
            Failure::Scenario(e)
        } else {
            Failure::Other(e.into())
        }
    }
}

async fn connect(server: Option<String>) -> Result<Client> {
    match server {
        Some(url) => Ok(Client::new(url)),
        None => {
            let addr = haulplan_server::spawn(SocketAddr::from(([127, 0, 0, 1], 0)))
                .await
                .context("starting embedded service")?;
            Ok(Client::new(format!("http://{addr}")))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn print_summary(results: &ResultSet) {
    println!(
        "{:<14} {:<34} {:>9} {:>9} {:>10} {:>9}",
        "route", "pair / dump", "Δtime s", "Δfuel L", "Δwear mm", "status"
    );
    for r in &results.routes {
        let label = format!("{} / {}", r.pair_label, r.dump_label);
        match (&r.status, r.savings) {
            (Status::Ok, Some(s)) => println!(
                "{:<14} {:<34} {:>9.2} {:>9.3} {:>10.6} {:>9}",
                r.route_id.to_string(),
                label,
                s.per_trip.time,
                s.per_trip.fuel,
                s.per_trip.tyre_wear,
                "ok"
            ),
            _ => println!(
                "{:<14} {:<34} {:>9} {:>9} {:>10} {:>9}",
                r.route_id.to_string(),
                label,
                "-",
                "-",
                "-",
                "error"
            ),
        }
    }
    if let Some(mean) = results.summary.mean {
        println!(
            "annual over {} trips (mean route): {:.0} h, {:.0} L, {:.1} mm",
            mean.trips_per_year,
            mean.annual.time_hours(),
            mean.annual.fuel,
            mean.annual.tyre_wear
        );
    }
}

async fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            scenario,
            out,
            svg,
            sample_step,
        } => {
            let text = read(&scenario)?;
            let client = connect(cli.server).await?;
            let record = client.create_raw(text).await?;
            let results = client.solve(&record.id, sample_step).await?;
            for e in results.errors() {
                let route = e.route_id.map(|r| r.to_string()).unwrap_or_default();
                eprintln!("warning: {route}: {} ({})", e.message, e.code);
            }
            if let Some(path) = &svg {
                write(path, &client.svg(&record.id, sample_step).await?)?;
            }
            match &out {
                Some(path) => {
                    write(path, &results.to_json())?;
                    print_summary(&results);
                }
                None => println!("{}", results.to_json()),
            }
            Ok(())
        }
        Command::Validate { scenario } => {
            let text = read(&scenario)?;
            let client = connect(cli.server).await?;
            let record = client.create_raw(text).await?;
            let s = &record.scenario;
            println!(
                "ok: {} entry/exit pairs, {} dump points, {} routes",
                s.entry_exit_pairs.len(),
                s.dump_points.len(),
                s.route_ids().count()
            );
            Ok(())
        }
        Command::Serve { port, host } => {
            let port = port.unwrap_or_else(haulplan_server::port_from_env);
            let listener = tokio::net::TcpListener::bind((host, port))
                .await
                .with_context(|| format!("binding {host}:{port}"))?;
            eprintln!(
                "haulplan service listening on http://{}",
                listener.local_addr().map_err(anyhow::Error::from)?
            );
            haulplan_server::serve(listener).await.context("serving")?;
            Ok(())
        }
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::new(level))
        .with_writer(std::io::stderr)
        .init();
    match run(cli).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Scenario(e)) => {
            eprintln!("scenario error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
