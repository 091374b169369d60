import { ApiClient } from "./api.js";
import { PivotApp } from "./app.js";

const app = new PivotApp(new ApiClient(""), document);
void app.start().catch((error) => {
  const status = document.getElementById("status");
  if (status) status.textContent = `failed to start: ${error}`;
});
