import { GatewayClient } from "./api.js";
import { ArenaConsole } from "./ui.js";

const params = new URLSearchParams(window.location.search);
const gateway = params.get("gateway") ?? "http://127.0.0.1:8000";
const bots = (params.get("bots") ?? "conceder,conceder").split(",").filter(Boolean);

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const console_ = new ArenaConsole(root, new GatewayClient(gateway), { bots });
void console_.start();

// Reconcile with the server periodically (bots answer synchronously, so
// this only matters across reloads or races).
setInterval(() => void console_.refresh(), 5000);
