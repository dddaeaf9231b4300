use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use nmnc_core::Library;
use nmnc_service::{router, DEFAULT_PORT};

/// Serve the nmnc compile API.
#[derive(Debug, Parser)]
#[command(name = "nmnc-server", version)]
struct Args {
    /// Port to listen on.
    #[arg(long, env = "NMNC_PORT", default_value_t = DEFAULT_PORT)]
    port: u16,
    /// Address to bind. Loopback unless told otherwise.
    #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
    host: IpAddr,
    /// Serve songs from this directory of `.nmn` files instead of the bundled library.
    #[arg(long)]
    library_dir: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let library = match &args.library_dir {
        Some(dir) => Library::load_dir(dir)?,
        None => Library::builtin().clone(),
    };
    let addr = SocketAddr::new(args.host, args.port);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("nmnc-server listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(library))).await?;
    Ok(())
}
