//! Drives the command-line front end from a TOML configuration.

fn main() {
    let dir = std::env::temp_dir().join("adslf-config-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let cfg = dir.join("run.toml");
    let text = format!(
        "[domain]\nx = [-0.5, 0.5]\ny = [-0.5, 0.5]\nstep = 0.02\n\n[params]\npreset = \"gcp-demo\"\nr = 2.0\n\n[output]\ndir = \"{}\"\n",
        dir.join("out").display()
    );
    std::fs::write(&cfg, text).expect("write config");
    let code = adslf::cli::run(["adslf", "surface", "case1", "--config", cfg.to_str().unwrap(), "--r", "0.5"]);
    println!("exit status {code}");
}
