import { App } from "./app.js";

function boot(): void {
  const mount = document.getElementById("app");
  if (!mount) {
    throw new Error("missing #app mount point");
  }
  const app = new App(mount);
  void app.start().catch((error: unknown) => {
    const banner = document.createElement("div");
    banner.className = "warning-banner";
    banner.textContent = `failed to load: ${String(error)}`;
    mount.prepend(banner);
  });
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}
