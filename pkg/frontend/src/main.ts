// Bootstrap: configuration comes from the query string
// (?api=<base>&project=<id>&token=<t>), defaulting to a service on the
// same origin and the demo project.

import { ApiClient } from "./api.js";
import { App } from "./app.js";

const params = new URLSearchParams(window.location.search);
const api = new ApiClient(params.get("api") ?? "", params.get("token"));
const projectId = params.get("project") ?? "soccer-demo";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app container");
}
void new App(root, api, projectId).start();
