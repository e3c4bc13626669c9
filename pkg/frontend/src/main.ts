import { ApiClient } from "./api.js";
import { LabelerApp } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

// same-origin by default; override with ?api=http://host:port when the
// page is served from elsewhere
const base = new URLSearchParams(window.location.search).get("api") ?? "";
void new LabelerApp(root, new ApiClient(base)).init();
